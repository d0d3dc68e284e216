"""Module for the empirical norm of the bordered free resolvent B R A."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from halfline_spectra.enclosure.exponents import (
    ExponentConfig,
    conjugate_exponent,
    require,
)
from halfline_spectra.resolvent.resolvent import BoundaryCondition, kernel

if TYPE_CHECKING:
    from halfline_spectra.potential.factorization import Factorization
    from halfline_spectra.resolvent.resolvent import SpectralPoint

logger = logging.getLogger(__name__)

REFERENCE_CELLS = 1024
SUPPORT_FACTOR = 5.0
GRADING = 3.0
COARSEST_LEVEL = 8
RANDOM_VECTORS = 8
ASCENT_STEPS = 30


def _reference_edges(extent: float) -> np.ndarray:
    t = np.arange(REFERENCE_CELLS + 1) / REFERENCE_CELLS
    return extent * np.expm1(GRADING * t) / math.expm1(GRADING)


def _level_boundaries(cells: int) -> np.ndarray:
    """Reference-cell indices bounding ``cells`` coarse cells; halving nests."""
    return np.round(np.arange(cells + 1) * REFERENCE_CELLS / cells).astype(int)


def _dual(v: np.ndarray, p: float) -> np.ndarray:
    """Unit vector of the dual space attaining <dual, v> = ||v||_p."""
    norm = np.linalg.norm(v, p)
    if norm == 0:
        return np.zeros_like(v)
    modulus = np.abs(v)
    phase = np.divide(v, modulus, out=np.zeros_like(v), where=modulus > 0)
    return phase * (modulus / norm) ** (p - 1)


def _ratio(matrix: np.ndarray, v: np.ndarray, p: float) -> float:
    denominator = np.linalg.norm(v, p)
    if denominator == 0:
        return 0.0
    return float(np.linalg.norm(matrix @ v, p) / denominator)


def _ascend(matrix: np.ndarray, start: np.ndarray, p: float) -> tuple[float, np.ndarray]:
    """p-norm power iteration that only keeps improvements."""
    q = conjugate_exponent(p)
    best, best_v = _ratio(matrix, start, p), start
    v = start
    for _ in range(ASCENT_STEPS):
        z = matrix.conj().T @ _dual(matrix @ v, p)
        if not np.any(z):
            break
        v = _dual(z, q)
        value = _ratio(matrix, v, p)
        if value <= best * (1 + 1e-15):
            if value > best:
                best, best_v = value, v
            break
        best, best_v = value, v
    return best, best_v


def bordered_resolvent_norm_probe(  # noqa: PLR0913
    f: Factorization,
    sp: SpectralPoint,
    p: float,
    grid_size: int = 128,
    bc: BoundaryCondition | None = None,
    seed: int = 0,
) -> float:
    """Estimate the L_p operator norm of u -> b R(lam) (a u) from below.

    Parameters
    ----------
    f : Factorization
        Factors a, b with exponents r, s.
    sp : SpectralPoint
        Spectral parameter.
    p : float
        Space exponent in (1, inf).
    grid_size : int, default = 128
        Number of cells of the test space, at most 1024.
    bc : BoundaryCondition, optional
        Dirichlet when omitted.
    seed : int, default = 0
        Seed of the random test vectors.

    Returns
    -------
    norm : float
        max ||B R A u||_p / ||u||_p over piecewise constant u on ``grid_size``
        graded cells.

    Notes
    -----
    The operator is discretized once by the midpoint rule on 1024 graded
    cells reaching 5 times the quadrature window of q. Test vectors are
    piecewise constant on coarser cells made of whole reference cells;
    grids are visited coarse to fine, each level ascending from the best
    vector of the previous one, so that the result never decreases when
    ``grid_size`` doubles.
    """
    if not 1 < p < math.inf:
        msg = f"Exponent p should be in (1, inf), got {p}."
        raise ValueError(msg)
    if not 1 <= grid_size <= REFERENCE_CELLS:
        msg = f"Parameter grid_size should be in [1, {REFERENCE_CELLS}], got {grid_size}."
        raise ValueError(msg)
    cfg = ExponentConfig(p, f.r, f.s)
    require(not cfg.is_extremal, "The probe needs a finite alpha.")
    require(p <= f.s, f"The probe needs p <= s, got p={p}, s={f.s}.")
    require(1 / f.r + 1 / p <= 1, f"The probe needs 1/r + 1/p <= 1, got r={f.r}, p={p}.")
    f.norms()

    extent = SUPPORT_FACTOR * f.q.window
    if extent == 0:
        return 0.0
    edges = _reference_edges(extent)
    nodes = (edges[:-1] + edges[1:]) / 2
    widths = np.diff(edges)
    bc = bc or BoundaryCondition.dirichlet()
    k = kernel(nodes[:, None], nodes[None, :], sp, bc)
    operator = f.b(nodes)[:, None] * k * (f.a(nodes) * widths)[None, :]
    scaled = widths[:, None] ** (1 / p) * operator

    levels = []
    size = grid_size
    while size >= COARSEST_LEVEL or not levels:
        levels.append(size)
        size //= 2
    best, best_ref = 0.0, None
    for cells in reversed(levels):
        bounds = _level_boundaries(cells)
        counts = np.diff(bounds)
        prolong = np.zeros((REFERENCE_CELLS, cells))
        prolong[np.arange(REFERENCE_CELLS), np.repeat(np.arange(cells), counts)] = 1.0
        cell_width = np.add.reduceat(widths, bounds[:-1])
        matrix = scaled @ prolong / cell_width[None, :] ** (1 / p)

        rng = np.random.default_rng([seed, cells])
        starts = list(
            rng.standard_normal((RANDOM_VECTORS, cells))
            + 1j * rng.standard_normal((RANDOM_VECTORS, cells))
        )
        if best_ref is not None:
            starts.insert(0, best_ref[bounds[:-1]] * cell_width ** (1 / p))
        for start in starts:
            value, v = _ascend(matrix, start, p)
            if value > best:
                best = value
                best_ref = prolong @ (v / cell_width ** (1 / p))
        logger.debug("Probe level %d cells: %.6e", cells, best)
    return best
