"""Resolvent module."""

from .probe import bordered_resolvent_norm_probe
from .resolvent import (
    BoundaryCondition,
    DisplayedIntegrals,
    RowNorm,
    SpectralPoint,
    displayed_integrals,
    kernel,
    kernel_dirichlet,
    kernel_robin,
    kernel_row_norm,
    row_norm_global_bound,
    row_norm_sup_extremal,
    spectral_point,
)

__all__ = [
    "BoundaryCondition",
    "DisplayedIntegrals",
    "RowNorm",
    "SpectralPoint",
    "bordered_resolvent_norm_probe",
    "displayed_integrals",
    "kernel",
    "kernel_dirichlet",
    "kernel_robin",
    "kernel_row_norm",
    "row_norm_global_bound",
    "row_norm_sup_extremal",
    "spectral_point",
]
