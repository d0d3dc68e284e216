"""Specfun module."""

from .specfun import GEval, g, g_sigma, g_sigma_eval, robin_ratio

__all__ = [
    "GEval",
    "g",
    "g_sigma",
    "g_sigma_eval",
    "robin_ratio",
]
