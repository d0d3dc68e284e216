"""Module for Lebesgue, weak and Lorentz norms of potentials."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate, optimize  # type: ignore[import-untyped]

from halfline_spectra.exceptions import ExponentError, NormDivergesError
from halfline_spectra.potential.potential import (
    DerivedPotential,
    Potential,
    SampledPotential,
    TailKind,
)

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 500
WEAK_GRID_POINTS = 400
WEAK_GRID_DEPTH = 1e-8
GAUSS_ORDER = 10

Method = Literal["auto", "numeric"]


class NormKind(str, enum.Enum):
    """Which norm a ``NormValue`` holds."""

    LEBESGUE = "lebesgue"
    WEIGHTED = "weighted"
    WEAK = "weak"
    LORENTZ = "lorentz"


@dataclass(frozen=True)
class NormValue:
    """Computed norm with its quadrature error estimate.

    ``exponents`` holds (r,) for Lebesgue and weak norms, (tau, r) for
    weighted norms and (p, r) for Lorentz norms.
    """

    value: float
    kind: NormKind
    exponents: tuple[float, ...]
    quadrature_error_estimate: float = 0.0

    def __post_init__(self) -> None:
        """Check finiteness."""
        if not math.isfinite(self.value) or self.value < 0:
            msg = f"Norm value should be finite and non-negative, got {self.value}."
            raise NormDivergesError(msg)

    def __float__(self) -> float:
        """Plain value."""
        return self.value


def _check_exponent(r: float, *, allow_inf: bool = True) -> None:
    if math.isnan(r) or r <= 0 or (math.isinf(r) and not allow_inf):
        msg = f"Exponent should be in (0, inf{']' if allow_inf else ')'}, got {r}."
        raise ExponentError(msg)


def _power_integral(f: Potential, r: float) -> tuple[float, float]:
    """Integral of |f|^r over [0, inf) and its error estimate."""
    if f.tail.lebesgue_divergent(r):
        msg = f"Integral of |f|^{r} diverges in the tail of {f!r}."
        raise NormDivergesError(msg)
    x_end = f.window
    if isinstance(f, SampledPotential) or (
        isinstance(f, DerivedPotential) and isinstance(f.parent, SampledPotential)
    ):
        body, err = _cellwise_integral(f, r)
    elif x_end > 0:
        points = [b for b in f.breakpoints if 0 < b < x_end] or None
        body, err = integrate.quad(
            lambda x: abs(f(x)) ** r,
            0.0,
            x_end,
            points=points,
            epsabs=QUAD_EPSABS,
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
        )
    else:
        body, err = 0.0, 0.0
    edge = abs(f(x_end)) if x_end > 0 else 0.0
    tail = f.tail.integral_beyond(x_end, edge, r)
    if not math.isfinite(tail):
        msg = f"Integral of |f|^{r} diverges in the tail of {f!r}."
        raise NormDivergesError(msg)
    return body + tail, err


def _cellwise_integral(f: Potential, r: float) -> tuple[float, float]:
    """Gauss-Legendre rule on every cell of a sample grid."""
    parent = f.parent if isinstance(f, DerivedPotential) else f
    edges = np.asarray(parent.x, dtype=float)  # type: ignore[attr-defined]
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    low_nodes, low_weights = np.polynomial.legendre.leggauss(GAUSS_ORDER // 2)
    left, width = edges[:-1, None], np.diff(edges)[:, None]

    def rule(n: np.ndarray, w: np.ndarray) -> float:
        x = left + width * (n[None, :] + 1) / 2
        return float(np.sum(np.abs(f(x)) ** r * w[None, :] * width / 2))

    fine = rule(nodes, weights)
    return fine, abs(fine - rule(low_nodes, low_weights))


def lebesgue_norm(f: Potential, r: float, method: Method = "auto") -> NormValue:
    """Calculate the L_r norm of a potential on the half-line.

    Parameters
    ----------
    f : Potential
        Input potential.
    r : float
        Exponent in (0, inf].
    method : {"auto", "numeric"}, default = "auto"
        "auto" uses the closed form of the family when one exists.

    Returns
    -------
    norm : NormValue
        (int |f|^r dx)^(1/r), or the essential supremum for r = inf.

    Raises
    ------
    NormDivergesError
        If the tail test shows the integral diverges.
    """
    _check_exponent(r)
    if method == "auto":
        exact = f.exact_lebesgue(r)
        if exact is not None:
            return NormValue(exact, NormKind.LEBESGUE, (r,))
    if math.isinf(r):
        if isinstance(f, SampledPotential):
            warnings.warn(
                "L_inf norm of a sampled potential is the grid maximum;"
                " it bounds the underlying function from below.",
                stacklevel=2,
            )
        return NormValue(f.max_modulus(), NormKind.LEBESGUE, (r,))
    integral, err = _power_integral(f, r)
    value = integral ** (1 / r)
    err_norm = value * err / (r * integral) if integral > 0 else 0.0
    return NormValue(value, NormKind.LEBESGUE, (r,), err_norm)


def weighted_norm(
    f: Potential,
    r: float,
    tau: float,
    weight: Literal["power", "exponential"] = "power",
) -> NormValue:
    """Calculate the L_r norm of (1 + x)^tau f or exp(tau x) f.

    The r-th power of the result is the integral entering the decaying
    potential estimates.
    """
    _check_exponent(r, allow_inf=False)
    if weight == "power":
        weighted = DerivedPotential(
            f,
            lambda x, q: (1 + x) ** tau * q,
            f.tail.power_weighted(tau),
            name=f"power_weight({tau})",
        )
    else:
        weighted = DerivedPotential(
            f,
            lambda x, q: np.exp(tau * x) * q,
            f.tail.exp_weighted(tau),
            name=f"exp_weight({tau})",
        )
    integral, err = _power_integral(weighted, r)
    value = integral ** (1 / r)
    err_norm = value * err / (r * integral) if integral > 0 else 0.0
    return NormValue(value, NormKind.WEIGHTED, (tau, r), err_norm)


def _superlevel_measure(f: Potential, t: float, *, strict: bool = True) -> float:
    """Measure of {|f| > t} (or >= t) from the piecewise-linear modulus profile."""
    x = f.profile_grid()
    m = np.abs(f(x))
    above = m > t if strict else m >= t
    left, right = above[:-1], above[1:]
    dx = np.diff(x)
    full = np.sum(dx[left & right])
    mixed = left ^ right
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = (m[:-1] - t) / (m[:-1] - m[1:])
    frac = np.where(left, frac, 1 - frac)
    partial = np.sum(dx[mixed] * np.clip(frac[mixed], 0.0, 1.0))
    edge = float(m[-1])
    tail = f.tail
    if tail.kind is TailKind.GROWING and edge > 0:
        return math.inf
    beyond = tail.superlevel_beyond(float(x[-1]), edge, t)
    if not strict and edge == t and tail.kind is not TailKind.COMPACT:
        beyond = max(beyond, 0.0)
    return float(full + partial + beyond)


def distribution_function(f: Potential, t: float, method: Method = "auto") -> float:
    """Calculate the distribution function lambda_f(t) = |{x : |f(x)| > t}|.

    Parameters
    ----------
    f : Potential
        Input potential.
    t : float
        Level, positive.
    method : {"auto", "numeric"}, default = "auto"
        "auto" inverts |f| analytically for the monotone families;
        "numeric" measures grid cells of the modulus profile.

    Returns
    -------
    measure : float
        Lebesgue measure of the superlevel set, ``math.inf`` if unbounded.
    """
    if not t > 0:
        msg = "Parameter t should be positive."
        raise ValueError(msg)
    if method == "auto":
        exact = f.exact_distribution(t)
        if exact is not None:
            return exact
    return _superlevel_measure(f, t)


def _log_objective(
    f: Potential, r: float, log_t: float, method: Method, *, strict: bool = True
) -> float:
    t = math.exp(log_t)
    if method == "auto" and strict:
        measure = distribution_function(f, t)
    else:
        measure = _superlevel_measure(f, t, strict=strict)
    return t**r * measure


def weak_norm(f: Potential, r: float, method: Method = "auto") -> NormValue:
    """Calculate the weak L_r norm sup_t (t^r lambda_f(t))^(1/r).

    The supremum is searched on 400 log-spaced levels in
    [max|f| 1e-8, max|f|], both for lambda_f and for its left limit
    |{|f| >= t}|, then refined by bounded Brent search around the grid maximizer.

    Parameters
    ----------
    f : Potential
        Input potential.
    r : float
        Exponent in (0, inf).
    method : {"auto", "numeric"}, default = "auto"
        "auto" uses the closed form of the family when one exists.

    Returns
    -------
    norm : NormValue
        Weak norm of ``f``.

    References
    ----------
    Grafakos, L. (2014).
    Classical Fourier Analysis, 3rd edition.
    Springer, Graduate Texts in Mathematics 249, section 1.1.
    """
    _check_exponent(r, allow_inf=False)
    if f.tail.weak_divergent(r):
        msg = f"Weak L_{r} norm of {f!r} diverges."
        raise NormDivergesError(msg)
    if method == "auto":
        exact = f.exact_weak(r)
        if exact is not None:
            return NormValue(exact, NormKind.WEAK, (r,))
    peak = f.max_modulus()
    if peak == 0:
        return NormValue(0.0, NormKind.WEAK, (r,))
    log_t = np.linspace(math.log(peak * WEAK_GRID_DEPTH), math.log(peak), WEAK_GRID_POINTS)
    strict = np.array([_log_objective(f, r, s, method) for s in log_t])
    left = np.array([_log_objective(f, r, s, method, strict=False) for s in log_t])
    if not np.all(np.isfinite(strict)) or not np.all(np.isfinite(left)):
        msg = f"Weak L_{r} norm of {f!r} diverges."
        raise NormDivergesError(msg)
    best = float(max(strict.max(), left.max()))
    k = int(np.argmax(strict))
    lo = log_t[max(k - 1, 0)]
    hi = log_t[min(k + 1, len(log_t) - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda s: -_log_objective(f, r, s, method),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, float(-res.fun))
    step = (log_t[1] - log_t[0]) if len(log_t) > 1 else 0.0
    return NormValue(best ** (1 / r), NormKind.WEAK, (r,), best ** (1 / r) * step**2)


def lorentz_norm(
    f: Potential, p: float, r: float, method: Method = "auto"
) -> NormValue:
    """Calculate the Lorentz norm ||f||_{p,r}.

    Normalized as ||f||_{p,r}^r = r int_0^inf t^r lambda_f(t)^(r/p) dt/t,
    so that ||f||_{r,r} = ||f||_r; ``p = inf`` gives the L_inf norm.

    Parameters
    ----------
    f : Potential
        Input potential.
    p : float
        Primary exponent in (0, inf].
    r : float
        Secondary exponent in (0, inf).
    method : {"auto", "numeric"}, default = "auto"
        "auto" uses the closed form of the family when one exists.

    Returns
    -------
    norm : NormValue
        Lorentz norm of ``f``.

    References
    ----------
    O'Neil, R. (1963).
    Convolution operators and L(p, q) spaces.
    Duke Mathematical Journal, 30(1), 129-142.
    """
    _check_exponent(p)
    _check_exponent(r, allow_inf=False)
    if math.isinf(p):
        value = lebesgue_norm(f, math.inf, method)
        return NormValue(value.value, NormKind.LORENTZ, (p, r))
    if f.tail.lorentz_divergent(p):
        msg = f"Lorentz norm ({p}, {r}) of {f!r} diverges."
        raise NormDivergesError(msg)
    if method == "auto":
        exact = f.exact_lorentz(p, r)
        if exact is not None:
            return NormValue(exact, NormKind.LORENTZ, (p, r))
    peak = f.max_modulus()
    if peak == 0:
        return NormValue(0.0, NormKind.LORENTZ, (p, r))

    def integrand(t: float) -> float:
        if t <= 0:
            return 0.0
        measure = distribution_function(f, t)
        return t ** (r - 1) * measure ** (r / p)

    integral, err = integrate.quad(
        integrand,
        0.0,
        peak,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    if not math.isfinite(integral):
        msg = f"Lorentz norm ({p}, {r}) of {f!r} diverges."
        raise NormDivergesError(msg)
    value = (r * integral) ** (1 / r)
    err_norm = value * err / (r * integral) if integral > 0 else 0.0
    return NormValue(value, NormKind.LORENTZ, (p, r), err_norm)
