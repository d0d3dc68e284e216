"""Module for complex potentials on the half-line."""

from __future__ import annotations

import abc
import copy
import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from halfline_spectra.exceptions import DomainError

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import ArrayLike

MACHINE_TOLERANCE = float(np.finfo(float).eps)
WINDOW_CAP = 64.0
PROFILE_POINTS = 20_001


class TailKind(str, enum.Enum):
    """Decay model of a potential beyond its quadrature window."""

    COMPACT = "compact"
    EXPONENTIAL = "exponential"
    POWER = "power"
    GROWING = "growing"


@dataclass(frozen=True)
class Tail:
    """Tail model |f(x)| = |f(x0)| * ratio(x, x0) for x >= x0.

    For ``EXPONENTIAL`` the ratio is exp(-rate (x - x0)), for ``POWER`` it is
    ((1 + x) / (1 + x0)) ** (-rate).
    """

    kind: TailKind
    rate: float = 0.0

    def __post_init__(self) -> None:
        """Collapse non-decaying tails to ``GROWING``."""
        decaying = (TailKind.EXPONENTIAL, TailKind.POWER)
        if self.kind in decaying and self.rate <= 0:
            object.__setattr__(self, "kind", TailKind.GROWING)

    def sqrt(self) -> Tail:
        """Tail of |f|^(1/2)."""
        return Tail(self.kind, self.rate / 2)

    def power_weighted(self, tau: float) -> Tail:
        """Tail of (1 + x)^tau f."""
        if self.kind is TailKind.POWER:
            return Tail(self.kind, self.rate - tau)
        return self

    def exp_weighted(self, tau: float) -> Tail:
        """Tail of exp(tau x) f."""
        if self.kind is TailKind.EXPONENTIAL:
            return Tail(self.kind, self.rate - tau)
        if self.kind is TailKind.POWER:
            return Tail(TailKind.GROWING)
        return self

    def lebesgue_divergent(self, r: float) -> bool:
        """Whether the L_r integral of the tail diverges."""
        if self.kind is TailKind.GROWING:
            return True
        return self.kind is TailKind.POWER and self.rate * r <= 1

    def weak_divergent(self, r: float) -> bool:
        """Whether sup_t t^r lambda_f(t) diverges as t -> 0."""
        if self.kind is TailKind.GROWING:
            return True
        return self.kind is TailKind.POWER and self.rate * r < 1

    def lorentz_divergent(self, p: float) -> bool:
        """Whether the Lorentz integral diverges at small levels."""
        if self.kind is TailKind.GROWING:
            return True
        return self.kind is TailKind.POWER and self.rate * p <= 1

    def integral_beyond(self, x0: float, value: float, r: float) -> float:
        """Integral of the r-th power of the tail model over (x0, inf)."""
        if value == 0 or self.kind is TailKind.COMPACT:
            return 0.0
        if self.kind is TailKind.EXPONENTIAL:
            return value**r / (r * self.rate)
        if self.kind is TailKind.POWER and self.rate * r > 1:
            return value**r * (1 + x0) / (self.rate * r - 1)
        return math.inf

    def superlevel_beyond(self, x0: float, value: float, t: float) -> float:
        """Length of {x > x0 : tail(x) > t}."""
        if value <= t or self.kind is TailKind.COMPACT:
            return 0.0
        if self.kind is TailKind.EXPONENTIAL:
            return math.log(value / t) / self.rate
        if self.kind is TailKind.POWER:
            return (1 + x0) * ((value / t) ** (1 / self.rate) - 1)
        return math.inf


class Potential(abc.ABC):
    """Complex-valued potential q on [0, inf).

    Subclasses implement ``_evaluate`` on arrays of non-negative abscissae and
    may override the closed-form hooks (``exact_*``), which return ``None``
    when the family has no shortcut.
    """

    label: str = "potential"
    support_override: float | None = None

    @abc.abstractmethod
    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        """Evaluate on a validated float array."""

    @property
    @abc.abstractmethod
    def natural_support(self) -> float:
        """Radius beyond which |q| is below machine tolerance times max |q|."""

    @property
    def support_hint(self) -> float:
        """Radius treated as the end of the support, user override first."""
        if self.support_override is not None:
            return self.support_override
        return self.natural_support

    def with_support(self, radius: float) -> Potential:
        """Copy of the potential whose support hint is fixed to ``radius``.

        Parameters
        ----------
        radius : float
            Positive, finite radius beyond which q is treated as zero by
            the eigenvalue solvers.

        Returns
        -------
        potential : Potential
            Same values, norms and tail, with ``support_hint == radius``.
        """
        if not math.isfinite(radius) or radius <= 0:
            msg = f"Support radius should be positive and finite, got {radius}."
            raise ValueError(msg)
        clone = copy.copy(self)
        object.__setattr__(clone, "support_override", float(radius))
        return clone

    @property
    @abc.abstractmethod
    def tail(self) -> Tail:
        """Decay model beyond the quadrature window."""

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Abscissae where q may be discontinuous."""
        return ()

    @property
    def window(self) -> float:
        """Right end of the interval treated by quadrature."""
        edge = max(self.breakpoints, default=0.0)
        return float(min(self.natural_support, max(WINDOW_CAP, 1.5 * edge)))

    @property
    def parameters(self) -> dict[str, Any]:
        """Family parameters, used for reports."""
        return {}

    def __call__(self, x: ArrayLike) -> Any:  # noqa: ANN401
        """Evaluate q(x); scalar in, complex out."""
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0) or np.any(np.isnan(arr)):
            msg = "Potentials are defined on the half-line, x should be >= 0."
            raise DomainError(msg)
        values = np.asarray(self._evaluate(np.atleast_1d(arr)), dtype=complex)
        if arr.ndim == 0:
            return complex(values[0])
        return values.reshape(arr.shape)

    def profile_grid(self, points: int = PROFILE_POINTS) -> np.ndarray:
        """Abscissae on [0, window] with both sides of every breakpoint."""
        grid = np.linspace(0.0, self.window, points)
        inner = [b for b in self.breakpoints if 0 < b < self.window]
        extra = np.concatenate([inner, np.nextafter(inner, np.inf)])
        return np.unique(np.concatenate([grid, extra]))

    def max_modulus(self) -> float:
        """Supremum of |q| (grid maximum unless the family knows better)."""
        return float(np.max(np.abs(self(self.profile_grid()))))

    def cell_average(self, x: np.ndarray, h: float) -> np.ndarray:
        """Average of q over [x - h/2, x + h/2] by Simpson's rule."""
        left = np.clip(x - h / 2, 0.0, None)
        return (self(left) + 4 * self(x) + self(x + h / 2)) / 6

    def exact_lebesgue(self, r: float) -> float | None:  # noqa: ARG002
        """Closed-form L_r norm."""
        return None

    def exact_distribution(self, t: float) -> float | None:  # noqa: ARG002
        """Closed-form distribution function."""
        return None

    def exact_weak(self, r: float) -> float | None:  # noqa: ARG002
        """Closed-form weak L_r norm."""
        return None

    def exact_lorentz(self, p: float, r: float) -> float | None:  # noqa: ARG002
        """Closed-form Lorentz norm."""
        return None

    def __repr__(self) -> str:
        """Family name with parameters."""
        args = ", ".join(f"{k}={v!r}" for k, v in self.parameters.items())
        return f"{type(self).__name__}({args})"


class ZeroPotential(Potential):
    """The free case q = 0."""

    label = "zero"

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(x, dtype=complex)

    @property
    def natural_support(self) -> float:
        """Empty support."""
        return 0.0

    @property
    def tail(self) -> Tail:
        """Nothing beyond the origin."""
        return Tail(TailKind.COMPACT)

    def max_modulus(self) -> float:
        """Zero."""
        return 0.0

    def exact_lebesgue(self, r: float) -> float:  # noqa: ARG002
        """Zero."""
        return 0.0

    def exact_distribution(self, t: float) -> float:  # noqa: ARG002
        """Zero."""
        return 0.0

    def exact_weak(self, r: float) -> float:  # noqa: ARG002
        """Zero."""
        return 0.0

    def exact_lorentz(self, p: float, r: float) -> float:  # noqa: ARG002
        """Zero."""
        return 0.0


@dataclass(frozen=True, repr=False)
class ExponentialPotential(Potential):
    """Scaled complex exponential q(x) = c exp(i phi) exp(-kappa x).

    Parameters
    ----------
    c : float
        Modulus scale, the sign may be absorbed into ``phi``.
    phi : float
        Phase of the potential.
    kappa : float
        Decay rate, positive.
    """

    c: float
    phi: float = 0.0
    kappa: float = 1.0
    label = "exponential"

    def __post_init__(self) -> None:
        """Validate the decay rate."""
        if self.kappa <= 0:
            msg = "Parameter kappa should be positive."
            raise ValueError(msg)

    @property
    def amplitude(self) -> complex:
        """Value at the origin."""
        return self.c * complex(math.cos(self.phi), math.sin(self.phi))

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.amplitude * np.exp(-self.kappa * x)

    @property
    def natural_support(self) -> float:
        """Point where the modulus has dropped by machine tolerance."""
        if self.c == 0:
            return 0.0
        return -math.log(MACHINE_TOLERANCE) / self.kappa

    @property
    def tail(self) -> Tail:
        """Exact exponential tail."""
        return Tail(TailKind.EXPONENTIAL, self.kappa)

    @property
    def parameters(self) -> dict[str, Any]:
        """Family parameters."""
        return {"c": self.c, "phi": self.phi, "kappa": self.kappa}

    def max_modulus(self) -> float:
        """Attained at the origin."""
        return abs(self.c)

    def exact_lebesgue(self, r: float) -> float:
        """|c| (r kappa)^(-1/r)."""
        if math.isinf(r):
            return abs(self.c)
        return abs(self.c) * (r * self.kappa) ** (-1 / r)

    def exact_distribution(self, t: float) -> float:
        """log(|c| / t) / kappa below the maximum."""
        if t >= abs(self.c):
            return 0.0
        return math.log(abs(self.c) / t) / self.kappa

    def exact_weak(self, r: float) -> float:
        """|c| (e r kappa)^(-1/r), attained at t = |c| exp(-1/r)."""
        return abs(self.c) * (math.e * r * self.kappa) ** (-1 / r)

    def exact_lorentz(self, p: float, r: float) -> float:
        """|c| kappa^(-1/p) r^(-1/p) Gamma(1 + r/p)^(1/r)."""
        if math.isinf(p):
            return abs(self.c)
        return (
            abs(self.c)
            * (r * self.kappa) ** (-1 / p)
            * math.gamma(1 + r / p) ** (1 / r)
        )


@dataclass(frozen=True, repr=False)
class SquareWell(Potential):
    """Complex square well q(x) = -v0 exp(i phi) on [0, width], zero beyond."""

    v0: float
    phi: float = 0.0
    width: float = 1.0
    label = "square_well"

    def __post_init__(self) -> None:
        """Validate the width."""
        if self.width <= 0:
            msg = "Parameter width should be positive."
            raise ValueError(msg)

    @property
    def depth(self) -> complex:
        """Value of q inside the well."""
        return -self.v0 * complex(math.cos(self.phi), math.sin(self.phi))

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.where(x <= self.width, self.depth, 0.0 + 0.0j)

    @property
    def natural_support(self) -> float:
        """The well width."""
        return self.width

    @property
    def tail(self) -> Tail:
        """Compact support."""
        return Tail(TailKind.COMPACT)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Edge of the well."""
        return (self.width,)

    @property
    def window(self) -> float:
        """The well itself."""
        return self.width

    @property
    def parameters(self) -> dict[str, Any]:
        """Family parameters."""
        return {"v0": self.v0, "phi": self.phi, "width": self.width}

    def max_modulus(self) -> float:
        """|v0|."""
        return abs(self.v0)

    def cell_average(self, x: np.ndarray, h: float) -> np.ndarray:
        """Exact overlap of each cell with the well."""
        left = np.clip(x - h / 2, 0.0, None)
        right = x + h / 2
        overlap = np.clip(np.minimum(right, self.width) - left, 0.0, None)
        return self.depth * overlap / (right - left)

    def exact_lebesgue(self, r: float) -> float:
        """|v0| width^(1/r)."""
        if math.isinf(r):
            return abs(self.v0)
        return abs(self.v0) * self.width ** (1 / r)

    def exact_distribution(self, t: float) -> float:
        """Width below |v0|, zero above."""
        return self.width if t < abs(self.v0) else 0.0

    def exact_weak(self, r: float) -> float:
        """Attained as t -> |v0| from below."""
        return abs(self.v0) * self.width ** (1 / r)

    def exact_lorentz(self, p: float, r: float) -> float:  # noqa: ARG002
        """|v0| width^(1/p)."""
        if math.isinf(p):
            return abs(self.v0)
        return abs(self.v0) * self.width ** (1 / p)


@dataclass(frozen=True, repr=False)
class PowerDecay(Potential):
    """Power decay q(x) = c exp(i phi) (1 + x)^(-rho)."""

    c: float
    rho: float = 2.0
    phi: float = 0.0
    label = "power"

    def __post_init__(self) -> None:
        """Validate the decay exponent."""
        if self.rho <= 0:
            msg = "Parameter rho should be positive."
            raise ValueError(msg)

    @property
    def amplitude(self) -> complex:
        """Value at the origin."""
        return self.c * complex(math.cos(self.phi), math.sin(self.phi))

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.amplitude * (1 + x) ** (-self.rho)

    @property
    def natural_support(self) -> float:
        """Point where the modulus has dropped by machine tolerance."""
        if self.c == 0:
            return 0.0
        return MACHINE_TOLERANCE ** (-1 / self.rho) - 1

    @property
    def tail(self) -> Tail:
        """Exact power tail."""
        return Tail(TailKind.POWER, self.rho)

    @property
    def parameters(self) -> dict[str, Any]:
        """Family parameters."""
        return {"c": self.c, "rho": self.rho, "phi": self.phi}

    def max_modulus(self) -> float:
        """Attained at the origin."""
        return abs(self.c)

    def exact_lebesgue(self, r: float) -> float | None:
        """|c| (rho r - 1)^(-1/r) when rho r > 1."""
        if math.isinf(r):
            return abs(self.c)
        if self.rho * r <= 1:
            return None
        return abs(self.c) * (self.rho * r - 1) ** (-1 / r)

    def exact_distribution(self, t: float) -> float:
        """Inversion of |c| (1 + x)^(-rho) = t."""
        if t >= abs(self.c):
            return 0.0
        return (abs(self.c) / t) ** (1 / self.rho) - 1

    def exact_weak(self, r: float) -> float | None:
        """Maximize t^r ((|c|/t)^(1/rho) - 1) over 0 < t < |c|."""
        inv = 1 / self.rho
        if r < inv:
            return None
        if math.isclose(r, inv, rel_tol=1e-14):
            return abs(self.c)
        t_star = abs(self.c) * ((r - inv) / r) ** self.rho
        return (t_star**r * inv / (r - inv)) ** (1 / r)

    def exact_lorentz(self, p: float, r: float) -> float | None:
        """|c| (r rho B(rho r - r/p, 1 + r/p))^(1/r) when rho p > 1."""
        if math.isinf(p):
            return abs(self.c)
        if self.rho * p <= 1:
            return None
        log_beta = (
            math.lgamma(self.rho * r - r / p)
            + math.lgamma(1 + r / p)
            - math.lgamma(self.rho * r + 1)
        )
        return abs(self.c) * (r * self.rho * math.exp(log_beta)) ** (1 / r)


@dataclass(frozen=True, repr=False)
class ExponentialSum(Potential):
    """User-supplied coefficient set q(x) = sum_k c_k exp(-kappa_k x)."""

    coefficients: tuple[complex, ...]
    rates: tuple[float, ...]
    label = "exponential_sum"

    def __post_init__(self) -> None:
        """Validate the coefficient set."""
        object.__setattr__(self, "coefficients", tuple(map(complex, self.coefficients)))
        object.__setattr__(self, "rates", tuple(map(float, self.rates)))
        if len(self.coefficients) != len(self.rates):
            msg = "Coefficients and rates should have equal lengths."
            raise ValueError(msg)
        if any(k <= 0 for k in self.rates):
            msg = "All rates should be positive."
            raise ValueError(msg)

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        c = np.asarray(self.coefficients, dtype=complex)[:, None]
        k = np.asarray(self.rates, dtype=float)[:, None]
        return np.sum(c * np.exp(-k * x[None, :]), axis=0)

    @property
    def natural_support(self) -> float:
        """Slowest term dominates the tail."""
        total = sum(abs(c) for c in self.coefficients)
        if total == 0:
            return 0.0
        return -math.log(MACHINE_TOLERANCE) / min(self.rates)

    @property
    def tail(self) -> Tail:
        """Slowest exponential."""
        return Tail(TailKind.EXPONENTIAL, min(self.rates))

    @property
    def parameters(self) -> dict[str, Any]:
        """Family parameters."""
        return {
            "coefficients": [[c.real, c.imag] for c in map(complex, self.coefficients)],
            "rates": list(self.rates),
        }


@dataclass(frozen=True, repr=False, eq=False)
class SampledPotential(Potential):
    """Potential given on a grid 0 = x_0 < ... < x_N.

    Values are linearly interpolated inside the grid (real and imaginary parts
    separately); beyond x_N the last value is continued by the tail model.
    """

    x: np.ndarray
    values: np.ndarray
    tail_rate: float = 1.0
    tail_kind: TailKind = TailKind.EXPONENTIAL
    source: str = field(default="", compare=False)
    label = "sampled"

    def __post_init__(self) -> None:
        """Validate the grid."""
        x = np.asarray(self.x, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or x.shape != values.shape or len(x) < 2:  # noqa: PLR2004
            msg = "Sampled potential needs matching 1-d grids of length >= 2."
            raise ValueError(msg)
        if x[0] != 0 or np.any(np.diff(x) <= 0):
            msg = "Sample grid should start at 0 and be strictly increasing."
            raise ValueError(msg)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "tail_kind", TailKind(self.tail_kind))

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        inside = np.interp(x, self.x, self.values.real) + 1j * np.interp(
            x, self.x, self.values.imag
        )
        end = self.x[-1]
        beyond = x > end
        if not np.any(beyond):
            return inside
        last = self.values[-1]
        dx = x[beyond]
        if self.tail.kind is TailKind.EXPONENTIAL:
            ratio = np.exp(-self.tail.rate * (dx - end))
        elif self.tail.kind is TailKind.POWER:
            ratio = ((1 + dx) / (1 + end)) ** (-self.tail.rate)
        elif self.tail.kind is TailKind.COMPACT:
            ratio = np.zeros_like(dx)
        else:
            ratio = np.ones_like(dx)
        inside[beyond] = last * ratio
        return inside

    @property
    def tail(self) -> Tail:
        """Tail model continuing the last sample."""
        return Tail(self.tail_kind, self.tail_rate)

    @property
    def natural_support(self) -> float:
        """Grid end plus the distance the tail needs to fade."""
        end = float(self.x[-1])
        peak = float(np.max(np.abs(self.values)))
        last = abs(self.values[-1])
        if peak == 0:
            return 0.0
        extra = self.tail.superlevel_beyond(end, last, MACHINE_TOLERANCE * peak)
        return end + extra

    @property
    def window(self) -> float:
        """The sample grid."""
        return float(self.x[-1])

    @property
    def parameters(self) -> dict[str, Any]:
        """Grid summary."""
        return {
            "source": self.source,
            "points": len(self.x),
            "tail_rate": self.tail_rate,
            "tail_kind": self.tail_kind.value,
        }

    def max_modulus(self) -> float:
        """Grid maximum; exact for the interpolant, a lower bound otherwise."""
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True, repr=False)
class DerivedPotential(Potential):
    """Pointwise transform of a parent potential, used for factors."""

    parent: Potential
    transform: Callable[[np.ndarray, np.ndarray], np.ndarray]
    derived_tail: Tail
    name: str = "derived"
    label = "derived"

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.transform(x, self.parent(x))

    @property
    def natural_support(self) -> float:
        """Support of the parent, stretched by the slower tail."""
        base = self.parent.natural_support
        if self.derived_tail.kind is TailKind.GROWING:
            return math.inf
        parent_tail = self.parent.tail
        if (
            self.derived_tail.kind is TailKind.EXPONENTIAL
            and parent_tail.kind is TailKind.EXPONENTIAL
        ):
            return base * parent_tail.rate / self.derived_tail.rate
        return base

    @property
    def window(self) -> float:
        """Same quadrature window as the parent, widened for slower tails."""
        if isinstance(self.parent, SampledPotential):
            return self.parent.window
        return float(min(self.natural_support, max(self.parent.window, WINDOW_CAP)))

    @property
    def tail(self) -> Tail:
        """Transformed tail model."""
        return self.derived_tail

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Inherited from the parent."""
        return self.parent.breakpoints

    @property
    def parameters(self) -> dict[str, Any]:
        """Transform name and parent parameters."""
        return {"transform": self.name, "parent": self.parent.parameters}


def evaluate(potential: Potential, x: ArrayLike) -> Any:  # noqa: ANN401
    """Evaluate a potential at x >= 0.

    Parameters
    ----------
    potential : Potential
        Closed-form or sampled potential.
    x : array_like
        Non-negative abscissae.

    Returns
    -------
    q : complex or numpy.ndarray
        q(x); linear interpolation inside a sample grid, tail model beyond it.

    Raises
    ------
    DomainError
        If any x is negative.
    """
    return potential(x)
