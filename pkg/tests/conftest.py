"""Collection of pytest fixtures."""

from __future__ import annotations

import math

import pytest
from scipy import optimize, special  # type: ignore[import-untyped]

from halfline_spectra.potential import (
    ExponentialPotential,
    PowerDecay,
    SquareWell,
    ZeroPotential,
)


@pytest.fixture(scope="session")
def zero_potential() -> ZeroPotential:
    """Free operator."""
    return ZeroPotential()


@pytest.fixture(scope="session")
def square_well() -> SquareWell:
    """Real well of depth 2 on [0, 2]."""
    return SquareWell(2.0, 0.0, 2.0)


@pytest.fixture(scope="session")
def exponential_well() -> ExponentialPotential:
    """Real exponential well -5 exp(-x)."""
    return ExponentialPotential(-5.0)


@pytest.fixture(scope="session")
def complex_exponential() -> ExponentialPotential:
    """Rotated exponential well -5 exp(i pi/6) exp(-x)."""
    return ExponentialPotential(-5.0, math.pi / 6)


@pytest.fixture(scope="session")
def power_decay() -> PowerDecay:
    """Complex inverse-square tail 1.5 exp(i/2) (1 + x)^-2."""
    return PowerDecay(1.5, 2.0, 0.5)


@pytest.fixture(scope="session")
def square_well_dirichlet_eigenvalue() -> float:
    """Only Dirichlet eigenvalue of the square well, from k cot(2k) = -kappa."""

    def matching(kappa: float) -> float:
        k = math.sqrt(2 - kappa**2)
        return k / math.tan(2 * k) + kappa

    kappa = optimize.brentq(matching, 1e-9, math.sqrt(2) - 1e-9, xtol=1e-15)
    return -(kappa**2)


@pytest.fixture(scope="session")
def square_well_neumann_eigenvalue() -> float:
    """Only Neumann eigenvalue of the square well, from k tan(2k) = kappa."""

    def matching(k: float) -> float:
        return k * math.tan(2 * k) - math.sqrt(2 - k**2)

    k = optimize.brentq(matching, 1e-6, math.pi / 4 - 1e-6, xtol=1e-15)
    return k**2 - 2


@pytest.fixture(scope="session")
def exponential_well_eigenvalue() -> float:
    """Only Dirichlet eigenvalue of -5 exp(-x), from J_{2 kappa}(2 sqrt 5) = 0."""
    order = optimize.brentq(lambda nu: special.jv(nu, 2 * math.sqrt(5)), 1.0, 2.0, xtol=1e-15)
    return -((order / 2) ** 2)
