"""Module for eigenvalue-enclosure radii.

Every ``bound_*`` function returns the radius R(theta) such that all
eigenvalues lam = |lam| exp(i theta) off [0, inf) satisfy |lam| <= R(theta).
"""

from __future__ import annotations

import cmath
import logging
import math
from typing import TYPE_CHECKING

import numpy as np
from scipy import optimize  # type: ignore[import-untyped]

from halfline_spectra.enclosure.exponents import (
    ExponentConfig,
    conjugate_exponent,
    corollary1_admissible,
    corollary2_admissible,
    require,
    theorem1_admissible,
)
from halfline_spectra.exceptions import ConvergenceError
from halfline_spectra.specfun.specfun import g, g_sigma

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

logger = logging.getLogger(__name__)

FIXED_POINT_ITERATIONS = 200
FIXED_POINT_TOLERANCE = 1e-13
GUARD_POINTS = 64


def _sin_half(theta: float) -> float:
    if not 0 < theta < 2 * math.pi:
        msg = f"Angle theta should be in (0, 2 pi), got {theta}."
        raise ValueError(msg)
    return math.sin(theta / 2)


def _product(norms: tuple[float, float]) -> float:
    a, b = (float(n) for n in norms)
    if a < 0 or b < 0 or not (math.isfinite(a) and math.isfinite(b)):
        msg = f"Norms should be finite and non-negative, got {norms}."
        raise ValueError(msg)
    return a * b


def _power_radius(log_factor: float, log_norm: float, norm_power: float, root: float) -> float:
    """exp((log_factor + norm_power * log_norm) / root), zero when the norm is."""
    if log_norm == -math.inf:
        return 0.0
    return math.exp((log_factor + norm_power * log_norm) / root)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def bound_thm1(
    norms: tuple[float, float], cfg: ExponentConfig, theta: float
) -> float:
    """Calculate R with R^(1 + alpha) = (alpha sin(theta/2))^(-2) (||a||_r ||b||_s)^(2 alpha).

    Parameters
    ----------
    norms : tuple of float
        (||a||_r, ||b||_s).
    cfg : ExponentConfig
        Exponents with finite alpha and p <= s.
    theta : float
        Angle in (0, 2 pi).

    Returns
    -------
    radius : float
        Enclosure radius at ``theta``.
    """
    require(
        theorem1_admissible(cfg),
        f"Exponents p={cfg.p}, r={cfg.r}, s={cfg.s} need finite alpha and p <= s.",
    )
    alpha = float(cfg.alpha)  # type: ignore[arg-type]
    log_factor = -2 * math.log(alpha * _sin_half(theta))
    return _power_radius(log_factor, _log(_product(norms)), 2 * alpha, 1 + alpha)


def bound_thm3(norms: tuple[float, float], cfg: ExponentConfig, theta: float) -> float:
    """Radius for H_sigma at any boundary condition; same formula as ``bound_thm1``."""
    return bound_thm1(norms, cfg, theta)


def bound_thm3_negative(norms: tuple[float, float], cfg: ExponentConfig) -> float:
    """Radius for negative eigenvalues of H_sigma: R^(1 + alpha) = alpha^(-2) N^(2 alpha)."""
    return bound_thm1(norms, cfg, math.pi)


def bound_thm2(norms: tuple[float, float], theta: float) -> float:
    """Calculate R = (g(cot(theta/2)) ||a||_p ||b||_p' / 2)^2.

    The radius is bounded in theta because 1 <= g <= 2.
    """
    _sin_half(theta)
    value = g(1 / math.tan(theta / 2)).value
    return (0.5 * value * _product(norms)) ** 2


def _cor1_log_factor(r: float, theta: float) -> float:
    return (2 - r) * math.log(r / (r - 2) * _sin_half(theta))


def bound_cor1(
    norms: tuple[float, float], r: float, theta: float, p: float = 2.0
) -> float:
    """Calculate R^(r - 1) = (r/(r - 2) sin(theta/2))^(2 - r) ||a||_r^r ||b||_r^r.

    Parameters
    ----------
    norms : tuple of float
        (||a||_r, ||b||_r).
    r : float
        Common exponent; r > 2 for p <= 2 and p <= r for p > 2.
    theta : float
        Angle in (0, 2 pi).
    p : float, default = 2.0
        Space exponent, only used by the admissibility gate.

    Returns
    -------
    radius : float
        Enclosure radius at ``theta``.
    """
    require(corollary1_admissible(r, p), f"Exponent r={r} is not admissible for p={p}.")
    return _power_radius(_cor1_log_factor(r, theta), _log(_product(norms)), r, r - 1)


def bound_cor2(integral: float, gamma: float, theta: float, p: float = 2.0) -> float:
    """Calculate R^gamma = ((2 gamma + 1)/(2 gamma - 1) sin(theta/2))^(1/2 - gamma) I.

    Parameters
    ----------
    integral : float
        I = int |q|^(gamma + 1/2) dx.
    gamma : float
        gamma > 1/2 for p <= 2, 2 gamma >= p - 1 for p > 2.
    theta : float
        Angle in (0, 2 pi).
    p : float, default = 2.0
        Space exponent, only used by the admissibility gate.

    Returns
    -------
    radius : float
        Enclosure radius at ``theta``.
    """
    admissible, boundary = corollary2_admissible(gamma, p)
    require(admissible, f"Exponent gamma={gamma} is not admissible for p={p}.")
    if boundary:
        logger.warning("gamma=%g sits on the boundary 2 gamma = p - 1 for p=%g.", gamma, p)
    ratio = (2 * gamma + 1) / (2 * gamma - 1)
    log_factor = (0.5 - gamma) * math.log(ratio * _sin_half(theta))
    return _power_radius(log_factor, _log(integral), 1.0, gamma)


def bound_rem1(integral: float, gamma: float) -> float:
    """Negative eigenvalues: R^gamma = ((2 gamma - 1)/(2 gamma + 1))^(gamma - 1/2) I."""
    require(gamma > 0.5, f"Exponent gamma={gamma} should exceed 1/2.")  # noqa: PLR2004
    ratio = (2 * gamma - 1) / (2 * gamma + 1)
    return _power_radius((gamma - 0.5) * math.log(ratio), _log(integral), 1.0, gamma)


def bound_cor3(
    weighted_integral: float, r: float, tau: float, theta: float, p: float = 2.0
) -> float:
    """Calculate R^(r - 1) = (tau r - 1)^(-1) (r/(r - 2) sin(theta/2))^(2 - r) J.

    ``weighted_integral`` is J = int |(1 + x)^tau q|^r dx and tau r > 1.
    """
    require(tau * r > 1, f"Power weight needs tau r > 1, got tau={tau}, r={r}.")
    require(corollary1_admissible(r, p), f"Exponent r={r} is not admissible for p={p}.")
    log_factor = _cor1_log_factor(r, theta) - math.log(tau * r - 1)
    return _power_radius(log_factor, _log(weighted_integral), 1.0, r - 1)


def bound_cor4(
    exp_integral: float, r: float, tau: float, theta: float, p: float = 2.0
) -> float:
    """Calculate R^(r - 1) = (tau r)^(-1) (r/(r - 2) sin(theta/2))^(2 - r) J.

    ``exp_integral`` is J = int exp(tau r x) |q|^r dx and tau > 0.
    """
    require(tau > 0, f"Exponential weight needs tau > 0, got {tau}.")
    require(corollary1_admissible(r, p), f"Exponent r={r} is not admissible for p={p}.")
    log_factor = _cor1_log_factor(r, theta) - math.log(tau * r)
    return _power_radius(log_factor, _log(exp_integral), 1.0, r - 1)


def bound_rem3(weighted_norm: float, p: float, tau: float, theta: float) -> float:
    """Calculate R = (g(cot(theta/2)) (p' tau - 1)^(-1/p') ||(1 + x)^tau q||_p / 2)^2."""
    p_conj = conjugate_exponent(p)
    require(p_conj * tau > 1, f"Power weight needs p' tau > 1, got p'={p_conj}, tau={tau}.")
    weight_norm = (p_conj * tau - 1) ** (-1 / p_conj)
    return bound_thm2((weight_norm, weighted_norm), theta)


def _thm4_map(n: float, sigma: float, theta: float, a: float) -> Callable[[float], float]:
    def step(rho: float) -> float:
        mu = cmath.rect(math.sqrt(max(rho, 1e-300)), theta / 2)
        return (0.5 * g_sigma(a, sigma, mu) * n) ** 2

    return step


def bound_thm4(
    norms: tuple[float, float],
    sigma: float,
    theta: float,
    mu_hint: complex | None = None,
) -> float:
    """Calculate R solving R^(1/2) = g_sigma(-cot(theta/2), sigma, mu(R)) ||a|| ||b|| / 2.

    Parameters
    ----------
    norms : tuple of float
        (||a||_p, ||b||_p) as printed, or (||a||_p, ||b||_p') for the Hoelder
        form; the caller picks the variant.
    sigma : float
        Robin parameter in [0, inf].
    theta : float
        Angle in (0, 2 pi).
    mu_hint : complex, optional
        Starting point; the iteration starts from |mu_hint|^2, otherwise from
        the upper bound (||a|| ||b||)^2.

    Returns
    -------
    radius : float
        Enclosure radius at ``theta``.

    Raises
    ------
    ConvergenceError
        If the damped iteration has not settled after 200 steps.

    Notes
    -----
    g_sigma depends on mu = R^(1/2) exp(i theta/2), so the radius is a fixed
    point along the ray. The damped iteration is followed by a scan of
    [R, (||a|| ||b||)^2] that lifts R to the largest rho with rho <= f(rho),
    so no part of the ray that the inequality admits is cut off.
    """
    sin_half = _sin_half(theta)
    if math.isinf(sigma):
        return bound_thm2(norms, theta)
    n = _product(norms)
    ceiling = n**2
    if n == 0:
        return 0.0
    step = _thm4_map(n, sigma, theta, -math.cos(theta / 2) / sin_half)
    rho = ceiling if mu_hint is None else abs(mu_hint) ** 2
    for iteration in range(FIXED_POINT_ITERATIONS):
        updated = 0.5 * (rho + step(rho))
        logger.debug("Fixed point step %d: %.15e", iteration, updated)
        if abs(updated - rho) <= FIXED_POINT_TOLERANCE * (1 + rho):
            rho = updated
            break
        rho = updated
    else:
        msg = f"Fixed point for sigma={sigma}, theta={theta} did not converge."
        raise ConvergenceError(msg)

    grid = np.linspace(rho, ceiling, GUARD_POINTS)
    excess = np.array([r - step(r) for r in grid])
    admitted = np.flatnonzero(excess <= 0)
    if admitted.size and grid[admitted[-1]] > rho:
        k = int(admitted[-1])
        lifted = float(grid[k])
        if k + 1 < GUARD_POINTS:
            lifted = float(optimize.brentq(lambda r: r - step(r), grid[k], grid[k + 1]))
        logger.warning(
            "Lifted the fixed point for sigma=%g, theta=%g from %.6e to %.6e.",
            sigma,
            theta,
            rho,
            lifted,
        )
        rho = lifted
    return min(rho, ceiling)


def bound_thm5_weak(
    weak_norms: tuple[float, float],
    cfg: ExponentConfig,
    theta: float,
    constant: float = 1.0,
) -> float:
    """Calculate R^(1 + alpha) = C (alpha sin(theta/2))^(-2) (||a||_{r,w} ||b||_{s,w})^(2 alpha).

    Parameters
    ----------
    weak_norms : tuple of float
        (||a||_{r,w}, ||b||_{s,w}).
    cfg : ExponentConfig
        Exponents under the same restrictions as ``bound_thm1``.
    theta : float
        Angle in (0, 2 pi).
    constant : float, default = 1.0
        The interpolation constant C; 1 gives the unscaled radius.

    Returns
    -------
    radius : float
        Enclosure radius at ``theta``.
    """
    if not constant > 0:
        msg = f"Constant C should be positive, got {constant}."
        raise ValueError(msg)
    unscaled = bound_thm1(weak_norms, cfg, theta)
    alpha = float(cfg.alpha)  # type: ignore[arg-type]
    return constant ** (1 / (1 + alpha)) * unscaled


def bound_cor5(weak_sup: float, gamma: float, constant: float = 1.0, p: float = 2.0) -> float:
    """Calculate R^gamma = C sup_t t^(gamma + 1/2) lambda_q(t).

    ``weak_sup`` equals ||q||_{gamma + 1/2, w}^(gamma + 1/2).
    """
    admissible, boundary = corollary2_admissible(gamma, p)
    require(
        admissible and not boundary,
        f"Exponent gamma={gamma} is not admissible for p={p}.",
    )
    if not constant > 0:
        msg = f"Constant C should be positive, got {constant}."
        raise ValueError(msg)
    return _power_radius(math.log(constant), _log(weak_sup), 1.0, gamma)


def estimate_constant(
    eigenvalues: Iterable[complex],
    unit_radius: Callable[[float], float],
    power: float,
) -> float:
    """Smallest C for which a C-scaled radius encloses the given eigenvalues.

    Parameters
    ----------
    eigenvalues : iterable of complex
        Eigenvalues off [0, inf).
    unit_radius : callable
        theta -> radius at C = 1.
    power : float
        R scales as C^(1/power): 1 + alpha for the weak-norm radius, gamma for
        the distribution-function radius.

    Returns
    -------
    constant : float
        max (|lam| / R_1(theta))^power, 0 for an empty input.
    """
    best = 0.0
    for lam in eigenvalues:
        theta = cmath.phase(lam) % (2 * math.pi)
        radius = unit_radius(theta)
        if radius == 0:
            return math.inf
        best = max(best, (abs(lam) / radius) ** power)
    return best

