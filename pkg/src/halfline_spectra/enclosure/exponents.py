"""Module for exponent relations and admissibility gates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from halfline_spectra.exceptions import ExponentError, InadmissibleExponentsError

EXTREMAL_TOLERANCE = 1e-14


class Extremal(enum.Enum):
    """Marker for the extremal regime r^-1 + s^-1 = 1, where alpha = inf."""

    EXTREMAL = "extremal"

    def __repr__(self) -> str:
        """Bare name."""
        return "EXTREMAL"


EXTREMAL = Extremal.EXTREMAL


def _reciprocal(e: float) -> float:
    if math.isnan(e) or e <= 0:
        msg = f"Exponents should be in (0, inf], got {e}."
        raise ExponentError(msg)
    return 0.0 if math.isinf(e) else 1 / e


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate p' = p / (p - 1), with 1' = inf and inf' = 1."""
    if math.isnan(p) or p < 1:
        msg = f"Exponent p should be in [1, inf], got {p}."
        raise ExponentError(msg)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def alpha_exponent(r: float, s: float) -> float | Extremal:
    """Calculate alpha = (1 - 1/r - 1/s)^(-1).

    Parameters
    ----------
    r : float
        Exponent of the left factor, in (0, inf].
    s : float
        Exponent of the right factor, in (0, inf].

    Returns
    -------
    alpha : float or Extremal
        alpha in [1, inf), or ``EXTREMAL`` when 1/r + 1/s = 1 within 1e-14.

    Raises
    ------
    InadmissibleExponentsError
        If 1/r + 1/s > 1, or r = s = inf.
    """
    total = _reciprocal(r) + _reciprocal(s)
    if math.isinf(r) and math.isinf(s):
        msg = "r = s = inf is not admissible: neither factor decays."
        raise InadmissibleExponentsError(msg)
    if abs(total - 1) <= EXTREMAL_TOLERANCE:
        return EXTREMAL
    if total > 1:
        msg = f"1/r + 1/s = {total:.6g} exceeds 1 for r={r}, s={s}."
        raise InadmissibleExponentsError(msg)
    return 1 / (1 - total)


def interpolation_exponents(alpha: float, theta_param: float) -> tuple[float, float]:
    """Calculate the interpolated exponents (beta, gamma).

    1/beta = (1 - t) + t / alpha' and 1/gamma = (1 - t) / alpha, so that
    1/alpha + 1/beta = 1/gamma + 1.

    Parameters
    ----------
    alpha : float
        Exponent in [1, inf).
    theta_param : float
        Interpolation parameter t in (0, 1).

    Returns
    -------
    beta, gamma : tuple of float
        gamma is ``math.inf`` when t = 1.
    """
    if not 1 <= alpha < math.inf:
        msg = f"Exponent alpha should be in [1, inf), got {alpha}."
        raise ExponentError(msg)
    if not 0 < theta_param < 1:
        msg = f"Parameter theta_param should be in (0, 1), got {theta_param}."
        raise ValueError(msg)
    alpha_conj_inv = 1 - 1 / alpha
    inv_beta = (1 - theta_param) + theta_param * alpha_conj_inv
    inv_gamma = (1 - theta_param) / alpha
    return 1 / inv_beta, (math.inf if inv_gamma == 0 else 1 / inv_gamma)


def interpolation_parameter(alpha: float, beta: float) -> float:
    """Recover t from 1/beta = (1 - t) + t / alpha'."""
    if not 1 <= alpha < math.inf:
        msg = f"Exponent alpha should be in [1, inf), got {alpha}."
        raise ExponentError(msg)
    return (1 - 1 / beta) * alpha


@dataclass(frozen=True)
class ExponentConfig:
    """Exponents (p, r, s) with the derived alpha.

    Parameters
    ----------
    p : float
        Space exponent in (1, inf).
    r : float
        Exponent of the left factor in (0, inf].
    s : float
        Exponent of the right factor in (0, inf].
    """

    p: float
    r: float
    s: float
    alpha: float | Extremal = field(init=False)

    def __post_init__(self) -> None:
        """Validate p and derive alpha."""
        if not 1 < self.p < math.inf:
            msg = f"Exponent p should be in (1, inf), got {self.p}."
            raise ExponentError(msg)
        object.__setattr__(self, "alpha", alpha_exponent(self.r, self.s))

    @property
    def p_conjugate(self) -> float:
        """p' = p / (p - 1)."""
        return conjugate_exponent(self.p)

    @property
    def is_extremal(self) -> bool:
        """Whether 1/r + 1/s = 1."""
        return self.alpha is EXTREMAL


def theorem1_admissible(cfg: ExponentConfig) -> bool:
    """Finite alpha and p <= s."""
    return not cfg.is_extremal and cfg.p <= cfg.s


def corollary1_admissible(r: float, p: float) -> bool:
    """r > 2 for 1 < p <= 2, p <= r <= inf for p > 2; r = inf is excluded."""
    if math.isinf(r):
        return False
    if p <= 2:  # noqa: PLR2004
        return r > 2  # noqa: PLR2004
    return p <= r


def corollary2_admissible(gamma: float, p: float) -> tuple[bool, bool]:
    """Gate for the sqrt-split estimate.

    Returns
    -------
    admissible, boundary : tuple of bool
        gamma > 1/2 for 1 < p <= 2 and 2 gamma >= p - 1 for p > 2; ``boundary``
        flags the equality 2 gamma = p - 1, where only the weak inequality holds.
    """
    if not gamma > 0.5:  # noqa: PLR2004
        return False, False
    if p <= 2:  # noqa: PLR2004
        return True, False
    gap = 2 * gamma - (p - 1)
    if abs(gap) <= EXTREMAL_TOLERANCE * max(1.0, p):
        return True, True
    return gap > 0, False


def require(condition: bool, message: str) -> None:  # noqa: FBT001
    """Raise ``InadmissibleExponentsError`` with ``message`` unless ``condition``."""
    if not condition:
        raise InadmissibleExponentsError(message)
