"""Module for factorizations q = a b of a potential."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from halfline_spectra.potential.norms import NormValue, lebesgue_norm
from halfline_spectra.potential.potential import (
    DerivedPotential,
    ExponentialPotential,
    ExponentialSum,
    Potential,
    PowerDecay,
    SquareWell,
    ZeroPotential,
)

RESIDUAL_TOLERANCE = 1e-12
RESIDUAL_POINTS = 1000


@dataclass(frozen=True)
class SqrtSplit:
    """a = |q|^(1/2), b = sgn(q) |q|^(1/2)."""

    name = "sqrt"


@dataclass(frozen=True)
class PowerWeight:
    """a = (1 + x)^(-tau), b = (1 + x)^tau q."""

    tau: float
    name = "power"


@dataclass(frozen=True)
class ExpWeight:
    """a = exp(-tau x), b = exp(tau x) q."""

    tau: float
    name = "exp"


Scheme = Union[SqrtSplit, PowerWeight, ExpWeight]


def scheme_from_name(name: str, tau: float | None = None) -> Scheme:
    """Build a scheme from its configuration name ("sqrt", "power", "exp")."""
    key = name.lower()
    if key in {"sqrt", "sqrtsplit", "sqrt_split"}:
        return SqrtSplit()
    weighted = {"power": PowerWeight, "exp": ExpWeight}
    base = key.replace("_", "").removesuffix("weight")
    if base in weighted:
        if tau is None or not tau > 0:
            msg = f"Scheme '{name}' needs a positive tau."
            raise ValueError(msg)
        return weighted[base](tau)
    msg = f"Unknown factorization scheme '{name}'."
    raise ValueError(msg)


@dataclass(frozen=True)
class Factorization:
    """Pair (a, b) with exponents (r, s) such that q = a b pointwise.

    Parameters
    ----------
    a : Potential
        Left factor, taken in L_r.
    b : Potential
        Right factor, taken in L_s.
    r : float
        Exponent of ``a`` in (0, inf].
    s : float
        Exponent of ``b`` in (0, inf].
    q : Potential
        The factored potential.
    scheme : Scheme
        How the split was made.
    """

    a: Potential
    b: Potential
    r: float
    s: float
    q: Potential
    scheme: Scheme

    def residual(self, points: int = RESIDUAL_POINTS) -> float:
        """Max of |a b - q| / (1 + |q|) on a uniform grid over the window."""
        end = self.q.window if self.q.window > 0 else 1.0
        x = np.linspace(0.0, end, points)
        qx = self.q(x)
        return float(np.max(np.abs(self.a(x) * self.b(x) - qx) / (1 + np.abs(qx))))

    def check(self, tolerance: float = RESIDUAL_TOLERANCE) -> None:
        """Raise when the factors do not multiply back to q."""
        res = self.residual()
        if res >= tolerance:
            msg = f"Factorization residual {res:.3e} exceeds {tolerance:.1e}."
            raise ValueError(msg)

    def norms(self) -> tuple[NormValue, NormValue]:
        """(||a||_r, ||b||_s)."""
        return lebesgue_norm(self.a, self.r), lebesgue_norm(self.b, self.s)

    def with_exponents(self, r: float, s: float) -> Factorization:
        """Same factors measured in other exponents."""
        return Factorization(self.a, self.b, r, s, self.q, self.scheme)


def _sign(q: np.ndarray) -> np.ndarray:
    modulus = np.abs(q)
    return np.divide(q, modulus, out=np.zeros_like(q), where=modulus > 0)


def _sqrt_split(q: Potential) -> tuple[Potential, Potential]:
    if isinstance(q, ZeroPotential):
        return ZeroPotential(), ZeroPotential()
    if isinstance(q, ExponentialPotential):
        root = math.sqrt(abs(q.c))
        half = q.kappa / 2
        return (
            ExponentialPotential(root, 0.0, half),
            ExponentialPotential(root, cmath.phase(q.amplitude), half),
        )
    if isinstance(q, PowerDecay):
        root = math.sqrt(abs(q.c))
        return (
            PowerDecay(root, q.rho / 2),
            PowerDecay(root, q.rho / 2, cmath.phase(q.amplitude)),
        )
    if isinstance(q, SquareWell):
        root = math.sqrt(abs(q.v0))
        return (
            SquareWell(-root, 0.0, q.width),
            SquareWell(math.copysign(root, q.v0), q.phi, q.width),
        )
    tail = q.tail.sqrt()
    a = DerivedPotential(q, lambda _, v: np.sqrt(np.abs(v)) + 0j, tail, "sqrt_abs")
    b = DerivedPotential(q, lambda _, v: _sign(v) * np.sqrt(np.abs(v)), tail, "sgn_sqrt")
    return a, b


def _power_weight(q: Potential, tau: float) -> tuple[Potential, Potential]:
    a = PowerDecay(1.0, tau)
    if isinstance(q, PowerDecay) and q.rho > tau:
        return a, PowerDecay(q.c, q.rho - tau, q.phi)
    b = DerivedPotential(
        q,
        lambda x, v: (1 + x) ** tau * v,
        q.tail.power_weighted(tau),
        f"power_weight({tau})",
    )
    return a, b


def _exp_weight(q: Potential, tau: float) -> tuple[Potential, Potential]:
    a = ExponentialPotential(1.0, 0.0, tau)
    if isinstance(q, ExponentialPotential) and q.kappa > tau:
        return a, ExponentialPotential(q.c, q.phi, q.kappa - tau)
    if isinstance(q, ExponentialSum) and min(q.rates) > tau:
        return a, ExponentialSum(q.coefficients, tuple(k - tau for k in q.rates))
    b = DerivedPotential(
        q, lambda x, v: np.exp(tau * x) * v, q.tail.exp_weighted(tau), f"exp_weight({tau})"
    )
    return a, b


def factorize(
    q: Potential, scheme: Scheme, r: float = 2.0, s: float | None = None
) -> Factorization:
    """Split a potential into factors q = a b.

    Parameters
    ----------
    q : Potential
        Potential to factor.
    scheme : SqrtSplit, PowerWeight or ExpWeight
        Splitting rule; sgn q is taken as 0 where q vanishes.
    r : float, default = 2.0
        Exponent attached to ``a``.
    s : float or None, default = None
        Exponent attached to ``b``, defaults to ``r``.

    Returns
    -------
    factorization : Factorization
        Factors with a b = q pointwise. Closed-form families are split into
        closed-form factors so their norms stay exact.
    """
    if isinstance(scheme, SqrtSplit):
        a, b = _sqrt_split(q)
    elif isinstance(scheme, PowerWeight):
        a, b = _power_weight(q, scheme.tau)
    elif isinstance(scheme, ExpWeight):
        a, b = _exp_weight(q, scheme.tau)
    else:
        msg = f"Unknown factorization scheme {scheme!r}."
        raise TypeError(msg)
    return Factorization(a, b, r, r if s is None else s, q, scheme)
