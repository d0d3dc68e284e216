"""Eigensolver module."""

from .contour import Circle, EigenSearch, Rectangle, count_in_contour, find_eigenvalues
from .finite_difference import dense_fd_eigs
from .shooting import (
    Eigenvalue,
    SolverMethod,
    default_truncation,
    neglected_tail,
    shoot_batch,
    shoot_characteristic,
)

__all__ = [
    "Circle",
    "EigenSearch",
    "Eigenvalue",
    "Rectangle",
    "SolverMethod",
    "count_in_contour",
    "default_truncation",
    "dense_fd_eigs",
    "find_eigenvalues",
    "neglected_tail",
    "shoot_batch",
    "shoot_characteristic",
]
