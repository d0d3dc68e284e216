"""Collection of tests of potential module."""

from __future__ import annotations

import math
import typing

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfline_spectra.exceptions import ConfigError, DomainError, NormDivergesError
from halfline_spectra.potential import (
    ExponentialPotential,
    ExponentialSum,
    ExpWeight,
    PowerDecay,
    PowerWeight,
    SampledPotential,
    SqrtSplit,
    SquareWell,
    build_family,
    distribution_function,
    evaluate,
    factorize,
    lebesgue_norm,
    lorentz_norm,
    potential_from_config,
    read_sample_file,
    weak_norm,
    weighted_norm,
)

if typing.TYPE_CHECKING:
    from pathlib import Path

    from halfline_spectra.potential import Potential

closed_form_potentials = [
    "square_well",
    "exponential_well",
    "complex_exponential",
    "power_decay",
]


@pytest.mark.parametrize("name", closed_form_potentials)
def test_scalar_evaluation(name: str, request: pytest.FixtureRequest) -> None:
    """Scalar input gives a complex number, arrays keep their shape."""
    q: Potential = request.getfixturevalue(name)
    if not isinstance(q(0.5), complex):
        msg = "Scalar evaluation should return a complex number."
        raise TypeError(msg)
    grid = np.linspace(0.0, 3.0, 12).reshape(3, 4)
    if evaluate(q, grid).shape != (3, 4):
        msg = "Array evaluation should keep the input shape."
        raise ValueError(msg)


@pytest.mark.parametrize("name", closed_form_potentials)
def test_negative_abscissa(name: str, request: pytest.FixtureRequest) -> None:
    """Potentials live on the half-line."""
    q = request.getfixturevalue(name)
    with pytest.raises(DomainError, match="half-line"):
        q(-1.0)
    with pytest.raises(DomainError):
        q(np.array([0.0, -1e-3]))


def test_family_values(square_well: SquareWell) -> None:
    """Values of the catalog formulas."""
    if square_well(1.0) != pytest.approx(-2.0):
        msg = "Square well depth is wrong."
        raise ValueError(msg)
    if square_well(2.5) != 0:
        msg = "Square well should vanish beyond its width."
        raise ValueError(msg)
    q = ExponentialPotential(2.0, math.pi / 2, 0.5)
    if q(2.0) != pytest.approx(2j * math.exp(-1.0)):
        msg = "Exponential potential value is wrong."
        raise ValueError(msg)
    q_sum = ExponentialSum((1.0, 1j), (1.0, 2.0))
    if q_sum(0.0) != pytest.approx(1 + 1j):
        msg = "Exponential sum value is wrong."
        raise ValueError(msg)


@pytest.mark.parametrize("name", closed_form_potentials)
@pytest.mark.parametrize("r", [1.0, 2.0, 3.5])
def test_lebesgue_closed_form_matches_quadrature(
    name: str, r: float, request: pytest.FixtureRequest
) -> None:
    """Closed-form norms agree with adaptive quadrature."""
    q: Potential = request.getfixturevalue(name)
    exact = lebesgue_norm(q, r).value
    numeric = lebesgue_norm(q, r, method="numeric").value
    if numeric != pytest.approx(exact, rel=1e-8):
        msg = f"L_{r} norm by quadrature {numeric} differs from {exact}."
        raise ValueError(msg)


def test_lebesgue_inf(complex_exponential: ExponentialPotential) -> None:
    """The L_inf norm is the modulus at the origin."""
    if lebesgue_norm(complex_exponential, math.inf).value != pytest.approx(5.0):
        msg = "L_inf norm should be 5."
        raise ValueError(msg)


def test_power_decay_divergent_norm() -> None:
    """A slowly decaying tail has no L_1 norm."""
    with pytest.raises(NormDivergesError):
        lebesgue_norm(PowerDecay(1.0, 0.75), 1.0, method="numeric")
    with pytest.raises(NormDivergesError):
        weak_norm(PowerDecay(1.0, 0.5), 1.0)


@given(st.floats(min_value=1.0, max_value=6.0))
@settings(deadline=None, max_examples=20)
def test_weak_norm_below_lebesgue(r: float) -> None:
    """Chebyshev: the weak norm never exceeds the strong one."""
    q = ExponentialPotential(-3.0, 0.4, 1.5)
    weak = weak_norm(q, r).value
    strong = lebesgue_norm(q, r).value
    if weak > strong * (1 + 1e-12):
        msg = f"Weak norm {weak} exceeds L_{r} norm {strong}."
        raise ValueError(msg)


@pytest.mark.parametrize("r", [1.0, 2.5])
def test_weak_norm_closed_form(r: float, complex_exponential: ExponentialPotential) -> None:
    """The level scan recovers |c| (e r kappa)^(-1/r)."""
    numeric = weak_norm(complex_exponential, r, method="numeric").value
    exact = 5.0 * (math.e * r) ** (-1 / r)
    if numeric != pytest.approx(exact, rel=1e-4):
        msg = f"Weak norm {numeric} differs from {exact}."
        raise ValueError(msg)


@pytest.mark.parametrize("r", [1.0, 2.0, 3.0])
def test_lorentz_diagonal_is_lebesgue(r: float, exponential_well: ExponentialPotential) -> None:
    """||f||_{r,r} = ||f||_r."""
    lorentz = lorentz_norm(exponential_well, r, r, method="numeric").value
    strong = lebesgue_norm(exponential_well, r).value
    if lorentz != pytest.approx(strong, rel=1e-7):
        msg = f"Lorentz norm {lorentz} differs from L_{r} norm {strong}."
        raise ValueError(msg)


def test_distribution_function(square_well: SquareWell) -> None:
    """Superlevel sets of the well are the well itself."""
    if distribution_function(square_well, 1.0, method="numeric") != pytest.approx(2.0, abs=1e-9):
        msg = "Superlevel set below the depth should be the well."
        raise ValueError(msg)
    if distribution_function(square_well, 3.0) != 0:
        msg = "Superlevel set above the depth should be empty."
        raise ValueError(msg)
    with pytest.raises(ValueError, match="positive"):
        distribution_function(square_well, 0.0)


def test_weighted_norm(exponential_well: ExponentialPotential) -> None:
    """||exp(x/2) q||_2 = 5 for q = -5 exp(-x)."""
    value = weighted_norm(exponential_well, 2.0, 0.5, "exponential").value
    if value != pytest.approx(5.0, rel=1e-8):
        msg = f"Exponentially weighted norm {value} should be 5."
        raise ValueError(msg)
    with pytest.raises(NormDivergesError):
        weighted_norm(PowerDecay(1.0, 1.0), 2.0, 1.0, "power")


@pytest.mark.parametrize("name", closed_form_potentials)
@pytest.mark.parametrize("scheme", [SqrtSplit(), PowerWeight(0.75), ExpWeight(0.25)])
def test_factorization_residual(
    name: str, scheme: SqrtSplit | PowerWeight | ExpWeight, request: pytest.FixtureRequest
) -> None:
    """Factors multiply back to the potential."""
    q = request.getfixturevalue(name)
    f = factorize(q, scheme, 4.0)
    if f.residual() >= 1e-12:
        msg = f"Residual {f.residual()} of {scheme} on {q!r} is too large."
        raise ValueError(msg)
    f.check()


def test_sqrt_split_norms(square_well: SquareWell) -> None:
    """Both sqrt factors have the norm |v0|^(1/2) width^(1/r)."""
    a_norm, b_norm = factorize(square_well, SqrtSplit(), 2.0).norms()
    expected = math.sqrt(2.0) * math.sqrt(2.0)
    if a_norm.value != pytest.approx(expected) or b_norm.value != pytest.approx(expected):
        msg = "Sqrt factors of the square well have wrong norms."
        raise ValueError(msg)


def test_potential_from_config() -> None:
    """Catalog tables build the family members."""
    q = potential_from_config({"kind": "square_well", "parameters": {"v0": 2.0, "width": 2.0}})
    if q != SquareWell(2.0, 0.0, 2.0):
        msg = "Square well built from a table differs."
        raise ValueError(msg)
    q_sum = potential_from_config(
        {
            "kind": "exponential_sum",
            "parameters": {"coefficients": [[1.0, 0.5], 2.0], "rates": [1.0, 3.0]},
        }
    )
    if q_sum.parameters["coefficients"] != [[1.0, 0.5], [2.0, 0.0]]:
        msg = "Exponential sum coefficients were not read as complex numbers."
        raise ValueError(msg)
    with pytest.raises(ConfigError, match="Unknown potential kind"):
        potential_from_config({"kind": "gaussian"})
    with pytest.raises(ConfigError, match="Invalid parameters"):
        potential_from_config({"kind": "square_well", "parameters": {"depth": 1.0}})


def test_support_hint_override() -> None:
    """A configured support_hint replaces the family radius, norms stay put."""
    natural = potential_from_config({"kind": "exponential", "parameters": {"c": 1.0}})
    q = potential_from_config(
        {"kind": "exponential", "parameters": {"c": 1.0}, "support_hint": 2.0}
    )
    if q.support_hint != 2.0 or natural.support_hint != pytest.approx(36.04, abs=0.01):
        msg = f"Support hint should be overridden to 2.0, got {q.support_hint}."
        raise ValueError(msg)
    if lebesgue_norm(q, 2.0).value != pytest.approx(lebesgue_norm(natural, 2.0).value):
        msg = "Overriding the support should not change the norms."
        raise ValueError(msg)
    if q(1.0) != natural(1.0) or q.window != natural.window:
        msg = "Overriding the support should not change values or the window."
        raise ValueError(msg)
    family = build_family(
        {
            "kind": "square_well",
            "parameters": {"v0": 1.0},
            "grid": {"width": [1.0, 2.0]},
            "support_hint": 5.0,
        }
    )
    if any(member.support_hint != 5.0 for _, member in family):
        msg = "Every family member should carry the configured support hint."
        raise ValueError(msg)


@pytest.mark.parametrize("radius", [0.0, -1.0, math.inf, math.nan, "far"])
def test_support_hint_rejected(radius: object) -> None:
    """Non-positive, non-finite and non-numeric hints are configuration errors."""
    with pytest.raises(ConfigError, match="Invalid support_hint"):
        potential_from_config(
            {"kind": "exponential", "parameters": {"c": 1.0}, "support_hint": radius}
        )


def test_build_family() -> None:
    """Grids expand into the cartesian product in order."""
    family = build_family(
        {
            "kind": "exponential",
            "parameters": {"c": -1.0},
            "grid": {"phi": [0.0, 0.5], "kappa": [1.0, 2.0]},
        }
    )
    if len(family) != 4:
        msg = "A 2 x 2 grid should give 4 potentials."
        raise ValueError(msg)
    params, q = family[1]
    if params != {"c": -1.0, "kappa": 1.0, "phi": 0.5} or q != ExponentialPotential(-1.0, 0.5):
        msg = f"Unexpected second member {params}."
        raise ValueError(msg)
    single = build_family({"kind": "power", "parameters": {"c": 1.0}})
    if single[0][0] != {"c": 1.0, "rho": 2.0, "phi": 0.0}:
        msg = "A family without grid should report the potential parameters."
        raise ValueError(msg)


def test_read_sample_file(tmp_path: Path) -> None:
    """Sampled exp(-x) keeps its L_2 norm up to interpolation error."""
    x = np.linspace(0.0, 10.0, 1001)
    path = tmp_path / "sample.txt"
    np.savetxt(path, np.column_stack([x, np.exp(-x), np.zeros_like(x)]), header="x re im")
    q = read_sample_file(path)
    if not isinstance(q, SampledPotential):
        msg = "Sample files should give a SampledPotential."
        raise TypeError(msg)
    if q(0.005) != pytest.approx(0.5 * (1 + math.exp(-0.01)), rel=1e-12):
        msg = "Samples should be interpolated linearly."
        raise ValueError(msg)
    if q(12.0) != pytest.approx(math.exp(-12.0), rel=1e-9):
        msg = "The exponential tail should continue the last sample."
        raise ValueError(msg)
    norm = lebesgue_norm(q, 2.0).value
    if norm != pytest.approx(math.sqrt(0.5), rel=1e-3):
        msg = f"Sampled L_2 norm {norm} should be close to 0.7071."
        raise ValueError(msg)


def test_read_sample_file_errors(tmp_path: Path) -> None:
    """Malformed sample files are configuration errors."""
    wide = tmp_path / "wide.txt"
    np.savetxt(wide, np.ones((3, 4)))
    with pytest.raises(ConfigError, match="columns"):
        read_sample_file(wide)
    shifted = tmp_path / "shifted.txt"
    np.savetxt(shifted, np.column_stack([[1.0, 2.0], [1.0, 1.0]]))
    with pytest.raises(ConfigError, match="start at 0"):
        read_sample_file(shifted)
    with pytest.raises(ConfigError, match="Could not read"):
        read_sample_file(tmp_path / "missing.txt")
