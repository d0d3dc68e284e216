"""Module for the supremum functions g and g_sigma of the extremal case."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize  # type: ignore[import-untyped]

from halfline_spectra.exceptions import BranchError

SCAN_POINTS = 2048
SCAN_MIN_LENGTH = 20.0
SCAN_MAX_LENGTH = 40.0
SAMPLES_PER_PERIOD = 16
REFINE_WINDOW = 0.1
REFINE_XATOL = 1e-12


@dataclass(frozen=True)
class GEval:
    """Value of g at ``argument`` and where the supremum is attained.

    ``maximizer_y`` is ``math.inf`` when the supremum is the limit value 1.
    """

    argument: float
    value: float
    maximizer_y: float


def _modulus_squared(y: np.ndarray | float, a: float, w: complex) -> np.ndarray:
    decay = np.exp(-np.asarray(y, dtype=float))
    rot = np.exp(-1j * a * np.asarray(y, dtype=float))
    return 1 + abs(w) ** 2 * decay**2 - 2 * decay * np.real(w * rot)


def _supremum(a: float, w: complex) -> tuple[float, float]:
    """sup over y >= 0 of |exp(i a y) - w exp(-y)| with its maximizer."""
    # exp(-y) is below double precision relative to 1 past SCAN_MAX_LENGTH
    length = SCAN_MAX_LENGTH
    if a != 0:
        length = min(max(SCAN_MIN_LENGTH, 6 * math.pi / abs(a)), SCAN_MAX_LENGTH)
    points = max(SCAN_POINTS, int(SAMPLES_PER_PERIOD * abs(a) * length / (2 * math.pi)))
    y = np.linspace(0.0, length, points)
    h2 = _modulus_squared(y, a, w)

    best_value, best_y = 1.0, math.inf
    if h2[0] > best_value:
        best_value, best_y = float(h2[0]), 0.0
    inner = np.flatnonzero((h2[1:-1] > h2[:-2]) & (h2[1:-1] >= h2[2:])) + 1
    cutoff = max(float(h2.max()) - REFINE_WINDOW, 1.0)
    for i in inner[h2[inner] >= cutoff]:
        res = optimize.minimize_scalar(
            lambda t: -float(_modulus_squared(t, a, w)),
            bounds=(y[i - 1], y[i + 1]),
            method="bounded",
            options={"xatol": REFINE_XATOL},
        )
        value = max(-float(res.fun), float(h2[i]))
        if value > best_value:
            best_value = value
            best_y = float(res.x) if -float(res.fun) >= h2[i] else float(y[i])
    return math.sqrt(best_value), best_y


def g(a: float) -> GEval:
    """Calculate g(a) = sup_{y >= 0} |exp(i a y) - exp(-y)|.

    Parameters
    ----------
    a : float
        Argument, usually cot(theta / 2).

    Returns
    -------
    geval : GEval
        Value in [1, 2] and the maximizing y.

    Notes
    -----
    h(y)^2 = 1 + exp(-2y) - 2 exp(-y) cos(a y) is scanned on a grid whose
    density grows with |a|, local maxima close to the best one are refined by
    bounded Brent search, and the limit value 1 at y -> inf is always a
    candidate. g is even, so |a| is used throughout.
    """
    if not math.isfinite(a):
        msg = "Argument of g should be finite."
        raise ValueError(msg)
    value, y = _supremum(abs(a), 1.0)
    return GEval(a, min(max(value, 1.0), 2.0), y)


def robin_ratio(sigma: float, mu: complex) -> complex:
    """w = (sigma + i mu) / (sigma - i mu), with w = 1 for sigma = inf."""
    if not mu.imag > 0:
        msg = f"mu should lie in the upper half-plane, got {mu}."
        raise BranchError(msg)
    if math.isnan(sigma) or sigma < 0:
        msg = f"Parameter sigma should be in [0, inf], got {sigma}."
        raise ValueError(msg)
    if math.isinf(sigma):
        return 1.0 + 0.0j
    return (sigma + 1j * mu) / (sigma - 1j * mu)


def g_sigma_eval(a: float, sigma: float, mu: complex) -> GEval:
    """Calculate g_sigma(a) = sup_{y >= 0} |exp(i a y) - w exp(-y)| with its maximizer.

    Parameters
    ----------
    a : float
        Argument, usually cot(theta / 2).
    sigma : float
        Robin parameter in [0, inf]; inf is the Dirichlet case.
    mu : complex
        Square root of the spectral parameter, Im mu > 0.

    Returns
    -------
    geval : GEval
        Supremum, between 1 and 2 since |w| <= 1, and the maximizing y.

    Raises
    ------
    BranchError
        If Im mu <= 0.
    """
    if not math.isfinite(a):
        msg = "Argument of g_sigma should be finite."
        raise ValueError(msg)
    w = robin_ratio(sigma, mu)
    if abs(w) > 1 + 1e-12:
        msg = f"|w| = {abs(w)} exceeds 1; sigma and mu are inconsistent."
        raise BranchError(msg)
    if w == 1:
        return g(a)
    value, y = _supremum(a, w)
    return GEval(a, min(max(value, 1.0), 2.0), y)


def g_sigma(a: float, sigma: float, mu: complex) -> float:
    """Value of :func:`g_sigma_eval`."""
    return g_sigma_eval(a, sigma, mu).value
