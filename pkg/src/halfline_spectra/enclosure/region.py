"""Module for sampled enclosure regions in the spectral plane."""

from __future__ import annotations

import contextlib
import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from halfline_spectra.enclosure import bounds
from halfline_spectra.enclosure.exponents import corollary2_admissible
from halfline_spectra.exceptions import NumericalError
from halfline_spectra.resolvent.resolvent import spectral_point

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

logger = logging.getLogger(__name__)

THETA_POINTS = 720
EXCLUSION = 1e-3
CONTAINS_RTOL = 1e-9
RAY_TOLERANCE = 1e-8


class Provenance(str, enum.Enum):
    """Estimate a region comes from."""

    THM1 = "Thm1"
    THM2 = "Thm2"
    THM3 = "Thm3"
    THM3_NEG = "Thm3Neg"
    THM4 = "Thm4"
    THM4_PRINTED = "Thm4Printed"
    THM5_WEAK = "Thm5Weak"
    COR1 = "Cor1"
    COR2 = "Cor2"
    COR3 = "Cor3"
    COR4 = "Cor4"
    COR5 = "Cor5"
    REM1 = "Rem1"
    REM3 = "Rem3"

    @property
    def ray_only(self) -> bool:
        """Whether the estimate only speaks about negative eigenvalues."""
        return self in {Provenance.THM3_NEG, Provenance.REM1}


def _thm4(theta: float, norms: tuple[float, float], sigma: float) -> float:
    return bounds.bound_thm4(norms, sigma, theta)


RADIUS_FUNCTIONS: dict[Provenance, Callable[..., float]] = {
    Provenance.THM1: lambda theta, norms, cfg: bounds.bound_thm1(norms, cfg, theta),
    Provenance.THM2: lambda theta, norms: bounds.bound_thm2(norms, theta),
    Provenance.THM3: lambda theta, norms, cfg: bounds.bound_thm3(norms, cfg, theta),
    Provenance.THM3_NEG: lambda _, norms, cfg: bounds.bound_thm3_negative(norms, cfg),
    Provenance.THM4: _thm4,
    Provenance.THM4_PRINTED: _thm4,
    Provenance.THM5_WEAK: lambda theta, weak_norms, cfg, constant=1.0: (
        bounds.bound_thm5_weak(weak_norms, cfg, theta, constant)
    ),
    Provenance.COR1: lambda theta, norms, r, p=2.0: bounds.bound_cor1(norms, r, theta, p),
    Provenance.COR2: lambda theta, integral, gamma, p=2.0: (
        bounds.bound_cor2(integral, gamma, theta, p)
    ),
    Provenance.COR3: lambda theta, weighted_integral, r, tau, p=2.0: (
        bounds.bound_cor3(weighted_integral, r, tau, theta, p)
    ),
    Provenance.COR4: lambda theta, exp_integral, r, tau, p=2.0: (
        bounds.bound_cor4(exp_integral, r, tau, theta, p)
    ),
    Provenance.COR5: lambda _, weak_sup, gamma, constant=1.0, p=2.0: (
        bounds.bound_cor5(weak_sup, gamma, constant, p)
    ),
    Provenance.REM1: lambda _, integral, gamma: bounds.bound_rem1(integral, gamma),
    Provenance.REM3: lambda theta, weighted_norm, p, tau: (
        bounds.bound_rem3(weighted_norm, p, tau, theta)
    ),
}


@dataclass(frozen=True)
class BoundSelector:
    """Provenance with the keyword arguments of its radius function.

    Parameters
    ----------
    provenance : Provenance
        Which estimate.
    params : Mapping
        Norms and exponents, e.g. ``{"norms": (1.0, 1.0), "cfg": cfg}`` for
        ``Thm1`` or ``{"integral": 1.0, "gamma": 1.5}`` for ``Cor2``.
    """

    provenance: Provenance
    params: Mapping[str, Any] = field(default_factory=dict)

    def radius(self, theta: float) -> float:
        """Radius at one angle."""
        return RADIUS_FUNCTIONS[Provenance(self.provenance)](theta, **self.params)


@dataclass(frozen=True, eq=False)
class EnclosureRegion:
    """Star-shaped region {|lam| <= R(theta)} sampled on an angle grid.

    For ray-only provenances (``Thm3Neg``, ``Rem1``) the radii are ``inf``
    and ``ray_radius`` bounds the negative eigenvalues.
    """

    thetas: np.ndarray
    radii: np.ndarray
    provenance: Provenance
    parameters: dict[str, Any]
    flags: tuple[str, ...] = ()
    ray_radius: float | None = None

    @property
    def max_radius(self) -> float:
        """Largest finite radius."""
        finite = self.radii[np.isfinite(self.radii)]
        values = [float(finite.max())] if finite.size else []
        if self.ray_radius is not None:
            values.append(self.ray_radius)
        return max(values, default=0.0)

    def radius_at(self, theta: float) -> float:
        """R(theta), linear between samples and ``inf`` outside the grid."""
        if self.ray_radius is not None and abs(theta - math.pi) <= RAY_TOLERANCE:
            return self.ray_radius
        if theta < self.thetas[0] or theta > self.thetas[-1]:
            return math.inf
        k = int(np.searchsorted(self.thetas, theta))
        if k == 0 or self.thetas[k] == theta:
            return float(self.radii[k])
        left, right = self.radii[k - 1], self.radii[k]
        if not (math.isfinite(left) and math.isfinite(right)):
            return math.inf
        t = (theta - self.thetas[k - 1]) / (self.thetas[k] - self.thetas[k - 1])
        return float(left + t * (right - left))


def theta_grid(points: int = THETA_POINTS, exclusion: float = EXCLUSION) -> np.ndarray:
    """Uniform angles in [exclusion, 2 pi - exclusion]."""
    if not 0 < exclusion < math.pi:
        msg = f"Exclusion should be in (0, pi), got {exclusion}."
        raise ValueError(msg)
    return np.linspace(exclusion, 2 * math.pi - exclusion, points)


def enclosure_region(
    bound: BoundSelector,
    thetas: np.ndarray | None = None,
    *,
    jobs: int = 1,
) -> EnclosureRegion:
    """Sample an enclosure region on an angle grid.

    Parameters
    ----------
    bound : BoundSelector
        Provenance and parameters of the estimate.
    thetas : numpy.ndarray, optional
        Increasing angles in (0, 2 pi); 720 angles avoiding 1e-3 around the
        positive axis by default.
    jobs : int, default = 1
        Threads used to sample the angles; output order is the grid order.

    Returns
    -------
    region : EnclosureRegion
        Radii per angle; angles where the computation fails numerically get
        ``inf``.

    Raises
    ------
    InadmissibleExponentsError
        If the parameters fail the admissibility gate of the estimate.
    """
    grid = theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    provenance = Provenance(bound.provenance)
    flags: list[str] = []
    if provenance in {Provenance.THM5_WEAK, Provenance.COR5} and (
        bound.params.get("constant", 1.0) == 1.0
    ):
        flags.append("unscaled")
    if provenance is Provenance.COR2:
        p = bound.params.get("p", 2.0)
        if corollary2_admissible(bound.params["gamma"], p)[1]:
            flags.append("boundary")
    if provenance is Provenance.THM4_PRINTED:
        flags.append("printed")

    if provenance.ray_only:
        ray = bound.radius(math.pi)
        radii = np.full(grid.shape, math.inf)
        return EnclosureRegion(
            grid, radii, provenance, dict(bound.params), tuple(flags), ray
        )

    # admissibility errors surface here rather than per angle
    with contextlib.suppress(NumericalError):
        bound.radius(float(grid[len(grid) // 2]))

    def sample(theta: float) -> float:
        try:
            return bound.radius(float(theta))
        except NumericalError as exc:
            logger.warning("%s at theta=%.6f failed: %s", provenance.value, theta, exc)
            return math.inf

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            radii = np.fromiter(pool.map(sample, grid), dtype=float, count=len(grid))
    else:
        radii = np.array([sample(t) for t in grid], dtype=float)
    return EnclosureRegion(grid, radii, provenance, dict(bound.params), tuple(flags))


def margin(region: EnclosureRegion, lam: complex) -> tuple[float, float]:
    """(R(theta), R(theta) - |lam|) for an eigenvalue off [0, inf)."""
    sp = spectral_point(lam)
    radius = region.radius_at(sp.theta)
    return radius, radius - abs(lam)


def contains(region: EnclosureRegion, lam: complex) -> bool:
    """Whether |lam| <= R(theta(lam)); the region is closed.

    Parameters
    ----------
    region : EnclosureRegion
        Sampled region.
    lam : complex
        Point off [0, inf).

    Returns
    -------
    inside : bool
        True when R(theta) - |lam| >= -1e-9 (1 + R(theta)).

    Raises
    ------
    EssentialSpectrumError
        If lam lies on [0, inf).
    """
    radius, gap = margin(region, lam)
    if math.isinf(radius):
        return True
    return gap >= -CONTAINS_RTOL * (1 + radius)
