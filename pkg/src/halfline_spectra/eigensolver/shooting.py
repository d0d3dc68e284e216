"""Module for the Jost-type characteristic function by backward shooting."""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate  # type: ignore[import-untyped]

from halfline_spectra.exceptions import IntegrationError
from halfline_spectra.resolvent.resolvent import BoundaryCondition, spectral_point

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from halfline_spectra.potential.potential import Potential

logger = logging.getLogger(__name__)

RTOL = 1e-11
ATOL = 1e-14
RESCALE_THRESHOLD = 1e100
MAX_GROWTH_PER_CHUNK = 50.0
TRUNCATION_CAP = 200.0


class SolverMethod(str, enum.Enum):
    """How an eigenvalue was computed."""

    SHOOTING = "shooting"
    DENSE_FD = "dense_fd"


@dataclass(frozen=True)
class Eigenvalue:
    """Computed eigenvalue with its diagnostics.

    Parameters
    ----------
    lam : complex
        Eigenvalue off [0, inf).
    residual : float
        |F(lam)| for shooting, the change under grid refinement for finite
        differences.
    method : SolverMethod
        Which solver produced it.
    truncation_length : float
        Domain length L at which it was accepted.
    bc : BoundaryCondition
        Boundary condition at the origin.
    converged : bool, default = True
        Whether the residual meets the solver tolerance.
    """

    lam: complex
    residual: float
    method: SolverMethod
    truncation_length: float
    bc: BoundaryCondition
    converged: bool = True


def default_truncation(q: Potential) -> float:
    """Three support radii, capped for slowly decaying potentials."""
    hint = q.support_hint
    if hint == 0:
        return 1.0
    return float(min(3 * hint, TRUNCATION_CAP))


def neglected_tail(q: Potential, length: float) -> float:
    """Relative size |q(L)| / max |q| of the potential cut off at ``length``.

    Zero when the support hint lies inside [0, L]. Otherwise a warning is
    logged: shooting then solves for q truncated at L.
    """
    if q.support_hint <= length:
        return 0.0
    peak = q.max_modulus()
    ratio = abs(q(length)) / peak if peak > 0 else 0.0
    logger.warning(
        "Potential %r is cut at L = %g inside its support %g, |q(L)| / max |q| = %.2e",
        q,
        length,
        q.support_hint,
        ratio,
    )
    return float(ratio)


def _chunks(q: Potential, start: float, max_decay: float) -> list[float]:
    """Abscissae from ``start`` down to 0 splitting at breakpoints and growth."""
    cuts = {start, 0.0}
    cuts.update(b for b in q.breakpoints if 0 < b < start)
    step = MAX_GROWTH_PER_CHUNK / max(max_decay, 1e-12)
    cuts.update(np.arange(step, start, step).tolist())
    return sorted(cuts, reverse=True)


def shoot_batch(
    q: Potential,
    lams: ArrayLike,
    truncation_length: float,
    bc: BoundaryCondition,
) -> np.ndarray:
    """Characteristic function F at many spectral parameters in one integration.

    Parameters
    ----------
    q : Potential
        Potential, negligible beyond ``truncation_length``.
    lams : array_like
        Spectral parameters off [0, inf).
    truncation_length : float
        Truncation length L.
    bc : BoundaryCondition
        Boundary condition at the origin.

    Returns
    -------
    values : numpy.ndarray
        F(lam) for every entry of ``lams``.
    """
    lam = np.atleast_1d(np.asarray(lams, dtype=complex))
    mu = np.array([spectral_point(z).mu for z in lam])
    m = lam.size
    start = float(min(truncation_length, q.support_hint))
    y = np.concatenate([np.ones(m, dtype=complex), 1j * mu])
    log_scale = 1j * mu * start

    def rhs(x: float, state: np.ndarray) -> np.ndarray:
        u, v = state[:m], state[m:]
        return np.concatenate([v, (q(x) - lam) * u])

    cuts = _chunks(q, start, float(np.max(mu.imag)) + float(np.max(np.abs(mu))))
    for x0, x1 in itertools.pairwise(cuts):
        sol = integrate.solve_ivp(
            rhs, (x0, x1), y, method="DOP853", rtol=RTOL, atol=ATOL
        )
        if sol.status != 0:
            msg = f"Integration from {x0} to {x1} failed: {sol.message}"
            raise IntegrationError(msg)
        y = sol.y[:, -1]
        size = np.maximum(np.abs(y[:m]), np.abs(y[m:]))
        big = size > RESCALE_THRESHOLD
        if np.any(big):
            y[:m][big] /= size[big]
            y[m:][big] /= size[big]
            log_scale[big] += np.log(size[big])
    u0, v0 = y[:m], y[m:]
    boundary = u0 if bc.is_dirichlet else v0 - bc.sigma * u0
    return boundary * np.exp(log_scale)


def shoot_characteristic(
    q: Potential,
    lam: complex,
    truncation_length: float | None = None,
    bc: BoundaryCondition | None = None,
) -> complex:
    """Evaluate the characteristic function F(lam).

    The solution of u'' = (q - lam) u with u = exp(i mu x) beyond the support
    of q is integrated backward to the origin with an adaptive embedded
    Runge-Kutta scheme (DOP853, rtol 1e-11), renormalizing when |u| exceeds
    1e100.

    Parameters
    ----------
    q : Potential
        Potential.
    lam : complex
        Spectral parameter off [0, inf).
    truncation_length : float, optional
        Truncation length L, three support radii by default.
    bc : BoundaryCondition, optional
        Dirichlet when omitted.

    Returns
    -------
    value : complex
        u(0) for Dirichlet, u'(0) - sigma u(0) for Robin.

    Raises
    ------
    IntegrationError
        If the step-size control fails.
    """
    length = default_truncation(q) if truncation_length is None else truncation_length
    bc = bc or BoundaryCondition.dirichlet()
    return complex(shoot_batch(q, [lam], length, bc)[0])
