"""Module for the free resolvent kernels on the half-line and their row norms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate  # type: ignore[import-untyped]

from halfline_spectra.exceptions import DomainError, EssentialSpectrumError, ExponentError
from halfline_spectra.specfun.specfun import g, g_sigma, robin_ratio

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

ESSENTIAL_TOLERANCE = 1e-13
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 500


@dataclass(frozen=True)
class BoundaryCondition:
    """Condition u'(0) = sigma u(0) at the origin.

    ``sigma = inf`` is Dirichlet u(0) = 0 and ``sigma = 0`` is Neumann.
    """

    sigma: float = math.inf

    def __post_init__(self) -> None:
        """Validate sigma."""
        if math.isnan(self.sigma) or self.sigma < 0:
            msg = f"Parameter sigma should be in [0, inf], got {self.sigma}."
            raise ValueError(msg)

    @classmethod
    def dirichlet(cls) -> BoundaryCondition:
        """u(0) = 0."""
        return cls(math.inf)

    @classmethod
    def neumann(cls) -> BoundaryCondition:
        """u'(0) = 0."""
        return cls(0.0)

    @classmethod
    def parse(cls, text: str | float) -> BoundaryCondition:
        """Read "dirichlet", "neumann" or a number as sigma."""
        if isinstance(text, str):
            key = text.strip().lower()
            if key == "dirichlet":
                return cls.dirichlet()
            if key == "neumann":
                return cls.neumann()
            try:
                return cls(float(key))
            except ValueError as exc:
                msg = f"Unknown boundary condition '{text}'."
                raise ValueError(msg) from exc
        return cls(float(text))

    @property
    def is_dirichlet(self) -> bool:
        """Whether sigma is infinite."""
        return math.isinf(self.sigma)

    @property
    def label(self) -> str:
        """Short name for reports."""
        if self.is_dirichlet:
            return "dirichlet"
        if self.sigma == 0:
            return "neumann"
        return f"robin({self.sigma:g})"


@dataclass(frozen=True)
class SpectralPoint:
    """Spectral parameter lam off [0, inf) with mu = lam^(1/2), Im mu > 0.

    ``theta`` is arg lam taken in (0, 2 pi).
    """

    lam: complex
    mu: complex
    theta: float

    @property
    def a(self) -> float:
        """cot(theta / 2), the argument of g."""
        return 1 / math.tan(self.theta / 2)


def spectral_point(lam: complex) -> SpectralPoint:
    """Attach the upper-branch square root and the angle to a spectral parameter.

    Parameters
    ----------
    lam : complex
        Spectral parameter.

    Returns
    -------
    sp : SpectralPoint
        mu with Im mu > 0 and mu^2 = lam, theta = arg lam in (0, 2 pi).

    Raises
    ------
    EssentialSpectrumError
        If lam lies on [0, inf) within 1e-13.
    """
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        msg = f"Spectral parameter should be finite, got {lam}."
        raise ValueError(msg)
    distance = abs(lam.imag) if lam.real >= 0 else abs(lam)
    if distance <= ESSENTIAL_TOLERANCE:
        msg = f"{lam} lies on the essential spectrum [0, inf)."
        raise EssentialSpectrumError(msg)
    mu = cmath.sqrt(lam)
    if mu.imag < 0:
        mu = -mu
    theta = cmath.phase(lam) % (2 * math.pi)
    return SpectralPoint(lam, mu, theta)


def _check_half_line(*args: ArrayLike) -> None:
    for arg in args:
        arr = np.asarray(arg, dtype=float)
        if np.any(arr < 0) or np.any(np.isnan(arr)):
            msg = "Kernel arguments should be >= 0."
            raise DomainError(msg)


def _kernel(x: ArrayLike, y: ArrayLike, mu: complex, w: complex) -> complex | np.ndarray:
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    value = -(np.exp(1j * mu * np.abs(x_arr - y_arr)) - w * np.exp(1j * mu * (x_arr + y_arr)))
    value = value / (2j * mu)
    if np.ndim(value) == 0:
        return complex(value)
    return value


def kernel_dirichlet(x: ArrayLike, y: ArrayLike, sp: SpectralPoint) -> complex | np.ndarray:
    """Free Dirichlet resolvent kernel.

    k(x, y) = -(exp(i mu |x - y|) - exp(i mu (x + y))) / (2 i mu),
    symmetric in (x, y) and zero on both axes.
    """
    _check_half_line(x, y)
    return _kernel(x, y, sp.mu, 1.0)


def kernel_robin(
    x: ArrayLike, y: ArrayLike, sp: SpectralPoint, sigma: float
) -> complex | np.ndarray:
    """Free Robin resolvent kernel for u'(0) = sigma u(0).

    Parameters
    ----------
    x, y : array_like
        Non-negative abscissae.
    sp : SpectralPoint
        Spectral parameter.
    sigma : float
        Robin parameter in [0, inf]; inf gives the Dirichlet kernel.

    Returns
    -------
    k : complex or numpy.ndarray
        -(exp(i mu |x - y|) - w exp(i mu (x + y))) / (2 i mu) with
        w = (sigma + i mu) / (sigma - i mu).
    """
    if math.isinf(sigma):
        return kernel_dirichlet(x, y, sp)
    _check_half_line(x, y)
    return _kernel(x, y, sp.mu, robin_ratio(sigma, sp.mu))


def kernel(
    x: ArrayLike, y: ArrayLike, sp: SpectralPoint, bc: BoundaryCondition
) -> complex | np.ndarray:
    """Kernel for either boundary condition."""
    return kernel_robin(x, y, sp, bc.sigma)


@dataclass(frozen=True)
class RowNorm:
    """L_alpha norm of the row y -> k(x, y) with its upper bounds."""

    quadrature: float
    closed_form_bound: float
    global_bound: float

    @property
    def slack(self) -> float:
        """Smallest gap in the chain quadrature <= closed form <= global."""
        return min(
            self.closed_form_bound - self.quadrature,
            self.global_bound - self.closed_form_bound,
        )


def _check_alpha(alpha: float) -> None:
    if not 1 <= alpha < math.inf:
        msg = f"Exponent alpha should be in [1, inf), got {alpha}."
        raise ExponentError(msg)


def row_norm_global_bound(sp: SpectralPoint, alpha: float) -> float:
    """Calculate sup_x ||k(x, .)||_alpha <= 1 / (|mu| (alpha Im mu)^(1/alpha)).

    Parameters
    ----------
    sp : SpectralPoint
        Spectral parameter.
    alpha : float
        Exponent in [1, inf).

    Returns
    -------
    bound : float
        Global row bound, valid for every boundary condition.
    """
    _check_alpha(alpha)
    return 1 / (abs(sp.mu) * (alpha * sp.mu.imag) ** (1 / alpha))


def _closed_form_bound(x: float, sp: SpectralPoint, alpha: float, w: complex) -> float:
    decay = alpha * sp.mu.imag
    near = (2 - math.exp(-decay * x)) ** (1 / alpha)
    far = abs(w) * math.exp(-sp.mu.imag * x)
    return (near + far) / (2 * abs(sp.mu) * decay ** (1 / alpha))


def kernel_row_norm(
    x: float,
    sp: SpectralPoint,
    alpha: float,
    bc: BoundaryCondition | None = None,
) -> RowNorm:
    """Calculate ||k(x, .)||_alpha by quadrature, with its closed-form bounds.

    The integral is split at y = x. Beyond x the row is
    exp(i mu y) (exp(-i mu x) - w exp(i mu x)) / (2 i mu), whose L_alpha
    integral is taken analytically.

    Parameters
    ----------
    x : float
        Row index, x >= 0.
    sp : SpectralPoint
        Spectral parameter.
    alpha : float
        Exponent in [1, inf).
    bc : BoundaryCondition, optional
        Dirichlet when omitted.

    Returns
    -------
    row : RowNorm
        Quadrature value, the Minkowski bound
        ((2 - exp(-alpha Im mu x))^(1/alpha) + |w| exp(-Im mu x))
        / (2 |mu| (alpha Im mu)^(1/alpha)) and the global bound.
    """
    _check_alpha(alpha)
    _check_half_line(x)
    bc = bc or BoundaryCondition.dirichlet()
    mu = sp.mu
    w = 1.0 + 0j if bc.is_dirichlet else robin_ratio(bc.sigma, mu)
    decay = alpha * mu.imag
    scale = 1 / (2 * abs(mu))

    tail = (scale * abs(1 - w * cmath.exp(2j * mu * x))) ** alpha / decay
    body = 0.0
    if x > 0:
        points = [x - k / decay for k in (1.0, 5.0, 20.0) if 0 < x - k / decay < x]
        body, _ = integrate.quad(
            lambda y: (
                scale * abs(cmath.exp(1j * mu * (x - y)) - w * cmath.exp(1j * mu * (x + y)))
            )
            ** alpha,
            0.0,
            x,
            points=points or None,
            epsabs=QUAD_EPSABS,
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
        )
    return RowNorm(
        (body + tail) ** (1 / alpha),
        _closed_form_bound(x, sp, alpha, w),
        row_norm_global_bound(sp, alpha),
    )


@dataclass(frozen=True)
class DisplayedIntegrals:
    """The two exact row integrals behind the closed-form row bound."""

    near_exact: float
    near_quadrature: float
    far_exact: float
    far_quadrature: float


def displayed_integrals(x: float, sp: SpectralPoint, alpha: float) -> DisplayedIntegrals:
    """Calculate int |exp(i mu |x - y|)|^alpha dy and int |exp(i mu (x + y))|^alpha dy.

    Closed forms are (2 - exp(-alpha Im mu x)) / (alpha Im mu) and
    exp(-alpha Im mu x) / (alpha Im mu); both are also integrated numerically.
    """
    _check_alpha(alpha)
    _check_half_line(x)
    decay = alpha * sp.mu.imag

    def near(y: float) -> float:
        return math.exp(-decay * abs(x - y))

    def far(y: float) -> float:
        return math.exp(-decay * (x + y))

    options = {"epsabs": QUAD_EPSABS, "epsrel": QUAD_EPSREL, "limit": QUAD_LIMIT}
    left = integrate.quad(near, 0.0, x, **options)[0] if x > 0 else 0.0
    right = integrate.quad(near, x, math.inf, **options)[0]
    far_value = integrate.quad(far, 0.0, math.inf, **options)[0]
    return DisplayedIntegrals(
        (2 - math.exp(-decay * x)) / decay,
        left + right,
        math.exp(-decay * x) / decay,
        far_value,
    )


def row_norm_sup_extremal(sp: SpectralPoint, bc: BoundaryCondition | None = None) -> float:
    """Calculate sup_{x, y} |k(x, y)|.

    Parameters
    ----------
    sp : SpectralPoint
        Spectral parameter.
    bc : BoundaryCondition, optional
        Dirichlet when omitted.

    Returns
    -------
    sup : float
        g(cot(theta / 2)) / (2 |mu|) for Dirichlet. For Robin the supremum
        is sup_y |exp(-i a y) - w exp(-y)| / (2 |mu|) with a = cot(theta / 2),
        i.e. g_sigma at -cot(theta / 2); the sign only matters for non-real w.
    """
    bc = bc or BoundaryCondition.dirichlet()
    scale = 1 / (2 * abs(sp.mu))
    if bc.is_dirichlet:
        return scale * g(sp.a).value
    return scale * g_sigma(-sp.a, bc.sigma, sp.mu)
