"""Enclosure module."""

from .bounds import (
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
    estimate_constant,
)
from .exponents import (
    EXTREMAL,
    ExponentConfig,
    Extremal,
    alpha_exponent,
    conjugate_exponent,
    corollary1_admissible,
    corollary2_admissible,
    interpolation_exponents,
    interpolation_parameter,
    theorem1_admissible,
)
from .region import (
    BoundSelector,
    EnclosureRegion,
    Provenance,
    contains,
    enclosure_region,
    margin,
    theta_grid,
)

__all__ = [
    "EXTREMAL",
    "BoundSelector",
    "EnclosureRegion",
    "ExponentConfig",
    "Extremal",
    "Provenance",
    "alpha_exponent",
    "bound_cor1",
    "bound_cor2",
    "bound_cor3",
    "bound_cor4",
    "bound_cor5",
    "bound_rem1",
    "bound_rem3",
    "bound_thm1",
    "bound_thm2",
    "bound_thm3",
    "bound_thm3_negative",
    "bound_thm4",
    "bound_thm5_weak",
    "conjugate_exponent",
    "contains",
    "corollary1_admissible",
    "corollary2_admissible",
    "enclosure_region",
    "estimate_constant",
    "interpolation_exponents",
    "interpolation_parameter",
    "margin",
    "theorem1_admissible",
    "theta_grid",
]
