"""Collection of tests of enclosure module."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfline_spectra.enclosure import (
    EXTREMAL,
    BoundSelector,
    ExponentConfig,
    Provenance,
    alpha_exponent,
    bound_cor1,
    bound_cor2,
    bound_cor3,
    bound_cor4,
    bound_cor5,
    bound_rem1,
    bound_rem3,
    bound_thm1,
    bound_thm2,
    bound_thm3,
    bound_thm3_negative,
    bound_thm4,
    bound_thm5_weak,
    conjugate_exponent,
    contains,
    corollary1_admissible,
    corollary2_admissible,
    enclosure_region,
    estimate_constant,
    interpolation_exponents,
    interpolation_parameter,
    margin,
    theorem1_admissible,
    theta_grid,
)
from halfline_spectra.exceptions import (
    EssentialSpectrumError,
    ExponentError,
    InadmissibleExponentsError,
)
from halfline_spectra.specfun import g, g_sigma

thetas = [0.2, 1.0, math.pi, 4.5, 6.0]


def test_alpha_exponent() -> None:
    """alpha = (1 - 1/r - 1/s)^(-1) with the extremal and forbidden cases."""
    if alpha_exponent(4.0, 4.0) != pytest.approx(2.0):
        msg = "alpha(4, 4) should be 2."
        raise ValueError(msg)
    if alpha_exponent(math.inf, 2.0) != pytest.approx(2.0):
        msg = "alpha(inf, 2) should be 2."
        raise ValueError(msg)
    if alpha_exponent(2.0, 2.0) is not EXTREMAL or alpha_exponent(3.0, 1.5) is not EXTREMAL:
        msg = "1/r + 1/s = 1 is the extremal case."
        raise ValueError(msg)
    with pytest.raises(InadmissibleExponentsError):
        alpha_exponent(2.0, 1.5)
    with pytest.raises(InadmissibleExponentsError):
        alpha_exponent(math.inf, math.inf)
    with pytest.raises(ExponentError):
        alpha_exponent(0.0, 3.0)


def test_conjugate_exponent() -> None:
    """Hoelder conjugates including the endpoints."""
    if conjugate_exponent(3.0) != pytest.approx(1.5):
        msg = "3' should be 1.5."
        raise ValueError(msg)
    if not math.isinf(conjugate_exponent(1.0)) or conjugate_exponent(math.inf) != 1:
        msg = "1' = inf and inf' = 1."
        raise ValueError(msg)
    with pytest.raises(ExponentError):
        conjugate_exponent(0.5)


@given(
    st.floats(min_value=1.0, max_value=20.0),
    st.floats(min_value=0.01, max_value=0.99),
)
def test_interpolation_identity(alpha: float, t: float) -> None:
    """1/alpha + 1/beta = 1/gamma + 1 and t is recovered from beta."""
    beta, gamma = interpolation_exponents(alpha, t)
    if 1 / alpha + 1 / beta != pytest.approx(1 / gamma + 1, rel=1e-12):
        msg = f"Interpolation identity fails for alpha={alpha}, t={t}."
        raise ValueError(msg)
    if interpolation_parameter(alpha, beta) != pytest.approx(t, rel=1e-9):
        msg = "Interpolation parameter is not recovered."
        raise ValueError(msg)


def test_gates() -> None:
    """Admissibility regions of the estimates."""
    cases = [
        (theorem1_admissible(ExponentConfig(2.0, 4.0, 4.0)), True),
        (theorem1_admissible(ExponentConfig(4.0, 8.0, 3.0)), False),
        (theorem1_admissible(ExponentConfig(2.0, 2.0, 2.0)), False),
        (corollary1_admissible(3.0, 2.0), True),
        (corollary1_admissible(2.0, 2.0), False),
        (corollary1_admissible(3.0, 4.0), False),
        (corollary1_admissible(math.inf, 2.0), False),
    ]
    for value, expected in cases:
        if value is not expected:
            msg = f"Gate gave {value}, expected {expected}."
            raise ValueError(msg)
    if corollary2_admissible(1.0, 3.0) != (True, True):
        msg = "2 gamma = p - 1 is the boundary case."
        raise ValueError(msg)
    if corollary2_admissible(0.5, 2.0) != (False, False):
        msg = "gamma = 1/2 is not admissible."
        raise ValueError(msg)
    if corollary2_admissible(0.75, 3.0) != (False, False):
        msg = "2 gamma < p - 1 is not admissible."
        raise ValueError(msg)


def test_bounds_raise_outside_gates() -> None:
    """Radius functions refuse inadmissible exponents."""
    with pytest.raises(InadmissibleExponentsError):
        bound_thm1((1.0, 1.0), ExponentConfig(4.0, 8.0, 3.0), 1.0)
    with pytest.raises(InadmissibleExponentsError):
        bound_cor1((1.0, 1.0), 2.0, 1.0)
    with pytest.raises(InadmissibleExponentsError):
        bound_cor2(1.0, 0.5, 1.0)
    with pytest.raises(InadmissibleExponentsError):
        bound_cor3(1.0, 3.0, 0.25, 1.0)
    with pytest.raises(InadmissibleExponentsError):
        bound_rem3(1.0, 2.0, 0.5, 1.0)
    with pytest.raises(InadmissibleExponentsError):
        bound_cor5(1.0, 1.0, p=3.0)
    with pytest.raises(ValueError, match="theta"):
        bound_thm2((1.0, 1.0), 0.0)


@pytest.mark.parametrize("r", [2.5, 3.0, 4.0, 6.0])
@pytest.mark.parametrize("theta", thetas)
def test_cor1_is_thm1_with_equal_exponents(r: float, theta: float) -> None:
    """The r = s specialization of the general radius."""
    norms = (0.8, 1.7)
    general = bound_thm1(norms, ExponentConfig(2.0, r, r), theta)
    special = bound_cor1(norms, r, theta)
    if special != pytest.approx(general, rel=1e-10):
        msg = f"Cor1 {special} differs from Thm1 {general} at r={r}."
        raise ValueError(msg)


@pytest.mark.parametrize("gamma", [0.75, 1.0, 1.5, 3.0])
@pytest.mark.parametrize("theta", thetas)
def test_cor2_is_cor1_with_sqrt_split(gamma: float, theta: float) -> None:
    """With ||a||_r = ||b||_r = I^(1/r) and r = 2 gamma + 1 both radii agree."""
    integral = 0.7
    r = 2 * gamma + 1
    norm = integral ** (1 / r)
    from_split = bound_cor1((norm, norm), r, theta)
    direct = bound_cor2(integral, gamma, theta)
    if direct != pytest.approx(from_split, rel=1e-10):
        msg = f"Cor2 {direct} differs from Cor1 {from_split} at gamma={gamma}."
        raise ValueError(msg)


@pytest.mark.parametrize("gamma", [0.75, 1.5, 4.0])
def test_cor2_on_negative_axis(gamma: float) -> None:
    """At theta = pi the sqrt-split radius is the negative-eigenvalue radius."""
    if bound_cor2(2.3, gamma, math.pi) != pytest.approx(bound_rem1(2.3, gamma), rel=1e-12):
        msg = "Cor2 at theta = pi should equal Rem1."
        raise ValueError(msg)


def test_thm3_negative_is_thm1_at_pi() -> None:
    """Negative eigenvalues use the theta = pi radius."""
    cfg = ExponentConfig(2.0, 3.0, 6.0)
    if bound_thm3_negative((1.1, 0.9), cfg) != pytest.approx(
        bound_thm1((1.1, 0.9), cfg, math.pi)
    ):
        msg = "Thm3Neg should be the Thm1 radius at pi."
        raise ValueError(msg)
    if bound_thm3((1.1, 0.9), cfg, 2.0) != bound_thm1((1.1, 0.9), cfg, 2.0):
        msg = "Thm3 should not depend on the boundary condition."
        raise ValueError(msg)


def test_thm1_scaling() -> None:
    """R^(1 + alpha) scales like N^(2 alpha) and zero norms give zero."""
    cfg = ExponentConfig(2.0, 4.0, 4.0)
    ratio = bound_thm1((2.0, 1.0), cfg, 1.0) / bound_thm1((1.0, 1.0), cfg, 1.0)
    if ratio != pytest.approx(2 ** (4 / 3)):
        msg = f"Radius ratio {ratio} should be 2^(4/3)."
        raise ValueError(msg)
    if bound_thm1((0.0, 1.0), cfg, 1.0) != 0:
        msg = "Zero norms should give a zero radius."
        raise ValueError(msg)


@given(st.floats(min_value=0.01, max_value=2 * math.pi - 0.01))
@settings(deadline=None, max_examples=40)
def test_thm2_bounded(theta: float) -> None:
    """(N/2)^2 <= R <= N^2 since 1 <= g <= 2."""
    radius = bound_thm2((1.5, 2.0), theta)
    if not 2.25 * (1 - 1e-12) <= radius <= 9.0:
        msg = f"Thm2 radius {radius} outside [2.25, 9]."
        raise ValueError(msg)


def test_thm2_on_negative_axis() -> None:
    """g(0) = 1 so R(pi) = (N/2)^2."""
    if bound_thm2((1.0, 2.0), math.pi) != pytest.approx(1.0, rel=1e-12):
        msg = "Thm2 radius at pi should be 1."
        raise ValueError(msg)
    expected = (0.5 * g(1 / math.tan(0.5)).value * 2.0) ** 2
    if bound_thm2((1.0, 2.0), 1.0) != pytest.approx(expected):
        msg = "Thm2 radius at theta = 1 is wrong."
        raise ValueError(msg)


def test_rem3_is_thm2_with_power_weight() -> None:
    """Weighted radius uses ||(1 + x)^-tau||_p' = (p' tau - 1)^(-1/p')."""
    weight = (2.0 * 1.5 - 1) ** (-1 / 2)
    if bound_rem3(0.9, 2.0, 1.5, 2.0) != pytest.approx(bound_thm2((weight, 0.9), 2.0)):
        msg = "Rem3 should be Thm2 with the weight norm."
        raise ValueError(msg)


def test_cor3_cor4_values() -> None:
    """Weighted corollaries divide the Cor1 factor by the weight integral."""
    r, theta, integral = 3.0, 2.0, 0.6
    base = (r / (r - 2) * math.sin(theta / 2)) ** (2 - r)
    cor3 = bound_cor3(integral, r, 1.0, theta)
    if cor3 ** (r - 1) != pytest.approx(base * integral / (1.0 * r - 1)):
        msg = "Cor3 radius is wrong."
        raise ValueError(msg)
    cor4 = bound_cor4(integral, r, 0.5, theta)
    if cor4 ** (r - 1) != pytest.approx(base * integral / (0.5 * r)):
        msg = "Cor4 radius is wrong."
        raise ValueError(msg)


def test_thm4_dirichlet_is_thm2() -> None:
    """sigma = inf reduces to the g-function radius."""
    if bound_thm4((1.2, 0.8), math.inf, 2.0) != bound_thm2((1.2, 0.8), 2.0):
        msg = "Thm4 with sigma = inf should equal Thm2."
        raise ValueError(msg)


@pytest.mark.parametrize("sigma", [0.0, 1.0, 5.0])
@pytest.mark.parametrize("theta", [1.0, math.pi, 5.0])
def test_thm4_fixed_point(sigma: float, theta: float) -> None:
    """R^(1/2) = g_sigma(-cot(theta/2), sigma, mu(R)) N / 2 with R <= N^2."""
    n = 1.2
    radius = bound_thm4((1.2, 1.0), sigma, theta)
    if not 0 < radius <= n**2 * (1 + 1e-12):
        msg = f"Thm4 radius {radius} outside (0, N^2]."
        raise ValueError(msg)
    mu = cmath.rect(math.sqrt(radius), theta / 2)
    value = g_sigma(-1 / math.tan(theta / 2), sigma, mu)
    if radius != pytest.approx((0.5 * value * n) ** 2, rel=1e-6):
        msg = f"Thm4 radius {radius} is not a fixed point."
        raise ValueError(msg)


def test_weak_bounds_scale_with_constant() -> None:
    """C enters as C^(1/(1 + alpha)) and C^(1/gamma)."""
    cfg = ExponentConfig(2.0, 4.0, 4.0)
    unscaled = bound_thm5_weak((1.0, 0.5), cfg, 1.0)
    if unscaled != pytest.approx(bound_thm1((1.0, 0.5), cfg, 1.0)):
        msg = "Unscaled weak radius should use the Thm1 formula."
        raise ValueError(msg)
    if bound_thm5_weak((1.0, 0.5), cfg, 1.0, 8.0) != pytest.approx(2 * unscaled):
        msg = "C = 8 should double the radius at alpha = 2."
        raise ValueError(msg)
    if bound_cor5(3.0, 2.0, 4.0) != pytest.approx(math.sqrt(12.0)):
        msg = "Cor5 radius should be (C sup)^(1/gamma)."
        raise ValueError(msg)
    with pytest.raises(ValueError, match="positive"):
        bound_cor5(3.0, 2.0, 0.0)


def test_estimate_constant() -> None:
    """Smallest C enclosing the points."""
    constant = estimate_constant([-2.0, 1j], lambda _: 1.0, 2.0)
    if constant != pytest.approx(4.0):
        msg = f"Constant {constant} should be 4."
        raise ValueError(msg)
    if estimate_constant([], lambda _: 1.0, 2.0) != 0:
        msg = "No eigenvalues need no constant."
        raise ValueError(msg)


def test_theta_grid() -> None:
    """Uniform grid avoiding the positive axis."""
    grid = theta_grid(8, 0.1)
    if grid[0] != pytest.approx(0.1) or grid[-1] != pytest.approx(2 * math.pi - 0.1):
        msg = "Grid should start and end at the exclusion."
        raise ValueError(msg)
    with pytest.raises(ValueError, match="Exclusion"):
        theta_grid(8, 0.0)


def test_region_contains_and_margin() -> None:
    """Closed star-shaped region around the origin."""
    region = enclosure_region(
        BoundSelector(Provenance.THM2, {"norms": (1.0, 2.0)}), theta_grid(73)
    )
    if region.radii.shape != (73,) or region.flags:
        msg = "Region should have one radius per angle and no flags."
        raise ValueError(msg)
    if not contains(region, -0.5) or contains(region, -100.0):
        msg = "Containment on the negative axis is wrong."
        raise ValueError(msg)
    radius, gap = margin(region, -0.5)
    if radius != pytest.approx(1.0) or gap != pytest.approx(0.5):
        msg = f"Margin at -0.5 should be (1, 0.5), got ({radius}, {gap})."
        raise ValueError(msg)
    if not contains(region, complex(-1.0, 1e-12)):
        msg = "Boundary points belong to the closed region."
        raise ValueError(msg)
    with pytest.raises(EssentialSpectrumError):
        contains(region, 2.0)
    if region.max_radius != pytest.approx(float(np.max(region.radii))):
        msg = "max_radius should be the largest sampled radius."
        raise ValueError(msg)


def test_ray_only_region() -> None:
    """Negative-eigenvalue estimates bound the negative axis only."""
    region = enclosure_region(BoundSelector(Provenance.REM1, {"integral": 2.0, "gamma": 1.5}))
    expected = bound_rem1(2.0, 1.5)
    if region.ray_radius != pytest.approx(expected) or not np.all(np.isinf(region.radii)):
        msg = "Ray-only region should carry a ray radius and infinite radii."
        raise ValueError(msg)
    if contains(region, -(expected + 1)) or not contains(region, -(expected - 1e-3)):
        msg = "Ray containment is wrong."
        raise ValueError(msg)
    if not contains(region, complex(-1e3, 1e3)):
        msg = "Off the negative axis the ray estimate says nothing."
        raise ValueError(msg)
    if not Provenance("Thm3Neg").ray_only or Provenance.COR2.ray_only:
        msg = "ray_only flags are wrong."
        raise ValueError(msg)


def test_region_flags() -> None:
    """Unscaled weak-norm regions and boundary exponents are flagged."""
    weak = enclosure_region(
        BoundSelector(
            Provenance.THM5_WEAK,
            {"weak_norms": (1.0, 1.0), "cfg": ExponentConfig(2.0, 4.0, 4.0)},
        ),
        theta_grid(9),
    )
    if weak.flags != ("unscaled",):
        msg = f"Weak region flags {weak.flags} should be ('unscaled',)."
        raise ValueError(msg)
    boundary = enclosure_region(
        BoundSelector(Provenance.COR2, {"integral": 1.0, "gamma": 1.0, "p": 3.0}),
        theta_grid(9),
    )
    if boundary.flags != ("boundary",):
        msg = f"Boundary region flags {boundary.flags} should be ('boundary',)."
        raise ValueError(msg)
    with pytest.raises(InadmissibleExponentsError):
        enclosure_region(BoundSelector(Provenance.COR2, {"integral": 1.0, "gamma": 0.4}))


def test_region_is_parallel_safe() -> None:
    """Threads give the same radii in the same order."""
    selector = BoundSelector(Provenance.COR2, {"integral": 1.3, "gamma": 1.5})
    grid = theta_grid(31)
    serial = enclosure_region(selector, grid)
    threaded = enclosure_region(selector, grid, jobs=4)
    if not np.array_equal(serial.radii, threaded.radii):
        msg = "Threaded sampling changed the radii."
        raise ValueError(msg)
