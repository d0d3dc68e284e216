"""Module for the finite-difference eigenvalue oracle."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np
from scipy import linalg  # type: ignore[import-untyped]

from halfline_spectra.eigensolver.shooting import Eigenvalue, SolverMethod
from halfline_spectra.resolvent.resolvent import BoundaryCondition

if TYPE_CHECKING:
    from halfline_spectra.potential.potential import Potential

logger = logging.getLogger(__name__)

MIN_POINTS = 64
DENSE_LIMIT = 1024
MARGIN = 1e-3
CAP = 1e3
CONVERGENCE_RTOL = 1e-4
INVERSE_ITERATIONS = 30


def _tridiagonal(
    q: Potential, length: float, n: int, bc: BoundaryCondition
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and (symmetric) off-diagonal of the discretized operator."""
    if bc.is_dirichlet:
        h = length / (n + 1)
        x = h * np.arange(1, n + 1)
    else:
        h = length / n
        x = h * np.arange(n)
    diag = 2 / h**2 + q.cell_average(x, h)
    off = np.full(n - 1, -1 / h**2, dtype=complex)
    if not bc.is_dirichlet:
        # ghost point u(-h) = u(h) - 2 h sigma u(0), symmetrized by scaling u(0)
        diag[0] += 2 * bc.sigma / h
        off[0] = -math.sqrt(2) / h**2
    return diag, off


def _banded(diag: np.ndarray, off: np.ndarray, shift: complex) -> np.ndarray:
    ab = np.zeros((3, diag.size), dtype=complex)
    ab[0, 1:] = off
    ab[1] = diag - shift
    ab[2, :-1] = off
    return ab


def _inverse_iteration(diag: np.ndarray, off: np.ndarray, seed: complex) -> complex:
    """Rayleigh-quotient iteration (unconjugated) on a complex symmetric tridiagonal."""
    lam = complex(seed)
    v = np.ones(diag.size, dtype=complex)
    for _ in range(INVERSE_ITERATIONS):
        try:
            v = linalg.solve_banded((1, 1), _banded(diag, off, lam), v)
        except linalg.LinAlgError:
            return lam
        v /= np.linalg.norm(v)
        av = diag * v
        av[:-1] += off * v[1:]
        av[1:] += off * v[:-1]
        updated = complex((v @ av) / (v @ v))
        if abs(updated - lam) <= 1e-13 * (1 + abs(lam)):
            return updated
        lam = updated
    return lam


def _spectrum(
    q: Potential,
    length: float,
    n: int,
    bc: BoundaryCondition,
    margin: float,
    cap: float,
) -> np.ndarray:
    diag, off = _tridiagonal(q, length, n, bc)
    if not np.any(diag.imag) and not np.any(off.imag):
        values = linalg.eigvalsh_tridiagonal(
            diag.real, off.real, select="v", select_range=(-cap, -margin)
        ).astype(complex)
    elif n <= DENSE_LIMIT:
        matrix = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
        values = linalg.eigvals(matrix)
    else:
        seeds = _spectrum(q, length, DENSE_LIMIT, bc, margin / 2, 2 * cap)
        values = np.array([_inverse_iteration(diag, off, s) for s in seeds], dtype=complex)
    distance = np.where(values.real >= 0, np.abs(values.imag), np.abs(values))
    keep = (distance > margin) & (np.abs(values) < cap)
    return values[keep]


def _nearest(value: complex, candidates: np.ndarray) -> complex | None:
    if candidates.size == 0:
        return None
    return complex(candidates[np.argmin(np.abs(candidates - value))])


def dense_fd_eigs(  # noqa: PLR0913
    q: Potential,
    truncation_length: float,
    n: int,
    bc: BoundaryCondition | None = None,
    margin: float = MARGIN,
    cap: float = CAP,
    *,
    extrapolate: bool = False,
    truncation_check: bool = False,
) -> list[Eigenvalue]:
    """Eigenvalues of the second-order finite-difference operator on [0, L].

    Parameters
    ----------
    q : Potential
        Potential.
    truncation_length : float
        Domain length L; Dirichlet condition at L.
    n : int
        Number of unknowns, at least 64.
    bc : BoundaryCondition, optional
        Condition at the origin, Dirichlet when omitted.
    margin : float, default = 1e-3
        Values closer than this to [0, inf) are dropped.
    cap : float, default = 1e3
        Values of modulus at least ``cap`` are dropped.
    extrapolate : bool, default = False
        Report the Richardson value (4 lam_2n - lam_n) / 3 instead of lam_n.
    truncation_check : bool, default = False
        Drop values that move under doubling of L at fixed step.

    Returns
    -------
    eigenvalues : list of Eigenvalue
        Sorted by modulus. ``residual`` is |lam_2n - lam_n| and ``converged``
        records whether it is within 1e-4 (1 + |lam|).

    Notes
    -----
    Cells average q over each grid cell so that jumps of a square well keep
    second-order accuracy. Real potentials go through a symmetric
    tridiagonal eigensolver and give exactly real values. Complex potentials
    with more than 1024 unknowns start from the 1024-point spectrum and
    refine each value by inverse iteration on the banded matrix.
    """
    if n < MIN_POINTS:
        msg = f"Parameter n should be at least {MIN_POINTS}, got {n}."
        raise ValueError(msg)
    if not truncation_length > 0:
        msg = f"Truncation length should be positive, got {truncation_length}."
        raise ValueError(msg)
    bc = bc or BoundaryCondition.dirichlet()
    # halving the step nests the grids for both boundary conditions
    refined = 2 * n + 1 if bc.is_dirichlet else 2 * n
    coarse = _spectrum(q, truncation_length, n, bc, margin, cap)
    fine = _spectrum(q, truncation_length, refined, bc, margin / 2, 2 * cap)
    if truncation_check:
        longer = _spectrum(q, 2 * truncation_length, refined, bc, margin / 2, 2 * cap)

    result = []
    for lam in coarse:
        partner = _nearest(lam, fine)
        residual = math.inf if partner is None else abs(partner - lam)
        converged = residual <= CONVERGENCE_RTOL * (1 + abs(lam))
        value = complex(lam)
        if extrapolate and partner is not None:
            value = (4 * partner - lam) / 3
        if truncation_check:
            moved = _nearest(lam, longer)
            if moved is None or abs(moved - lam) > CONVERGENCE_RTOL * (1 + abs(lam)):
                logger.debug("Dropping box mode %s", lam)
                continue
        if not converged:
            logger.warning(
                "Finite-difference value %s moved by %.3e under refinement", lam, residual
            )
        result.append(
            Eigenvalue(
                value, float(residual), SolverMethod.DENSE_FD, truncation_length, bc, converged
            )
        )
    result.sort(key=lambda e: (abs(e.lam), e.lam.real, e.lam.imag))
    return result
