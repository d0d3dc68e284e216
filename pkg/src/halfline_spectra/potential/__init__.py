"""Potential module."""

from .catalog import build_family, potential_from_config, read_sample_file
from .factorization import (
    ExpWeight,
    Factorization,
    PowerWeight,
    SqrtSplit,
    factorize,
    scheme_from_name,
)
from .norms import (
    NormKind,
    NormValue,
    distribution_function,
    lebesgue_norm,
    lorentz_norm,
    weak_norm,
    weighted_norm,
)
from .potential import (
    DerivedPotential,
    ExponentialPotential,
    ExponentialSum,
    Potential,
    PowerDecay,
    SampledPotential,
    SquareWell,
    Tail,
    TailKind,
    ZeroPotential,
    evaluate,
)

__all__ = [
    "DerivedPotential",
    "ExpWeight",
    "ExponentialPotential",
    "ExponentialSum",
    "Factorization",
    "NormKind",
    "NormValue",
    "Potential",
    "PowerDecay",
    "PowerWeight",
    "SampledPotential",
    "SqrtSplit",
    "SquareWell",
    "Tail",
    "TailKind",
    "ZeroPotential",
    "build_family",
    "distribution_function",
    "evaluate",
    "factorize",
    "lebesgue_norm",
    "lorentz_norm",
    "potential_from_config",
    "read_sample_file",
    "scheme_from_name",
    "weak_norm",
    "weighted_norm",
]
