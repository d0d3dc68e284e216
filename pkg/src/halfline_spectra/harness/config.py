"""Module for reading campaign configuration documents."""

from __future__ import annotations

import itertools
import logging
import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any

from halfline_spectra.exceptions import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

if TYPE_CHECKING:
    from collections.abc import Mapping

logger = logging.getLogger(__name__)

EXPONENT_KEYS = ("p", "r", "s", "gamma", "tau", "sigma", "constant")
BOX_CORNERS = 4
FORMATS = ("csv", "json", "svg")


@dataclass(frozen=True)
class BoundSpec:
    """One estimate with its exponents, before any potential is known.

    Parameters
    ----------
    provenance : str
        Estimate name, e.g. "Thm2" or "Cor2".
    scheme : str, default = "sqrt"
        Factorization scheme for the estimates built on q = a b.
    p : float, default = 2.0
        Space exponent.
    r, s : float, optional
        Exponents of the factors; ``s`` defaults to ``r``.
    gamma : float, optional
        Exponent of the sqrt-split estimates.
    tau : float, optional
        Weight exponent.
    sigma : float, optional
        Robin parameter; taken from the boundary condition when omitted.
    constant : float, default = 1.0
        Interpolation constant of the weak-norm estimates.
    """

    provenance: str
    scheme: str = "sqrt"
    p: float = 2.0
    r: float | None = None
    s: float | None = None
    gamma: float | None = None
    tau: float | None = None
    sigma: float | None = None
    constant: float = 1.0

    def exponents(self) -> dict[str, Any]:
        """Non-default exponents and the scheme, used as report labels."""
        values: dict[str, Any] = {"scheme": self.scheme}
        for key in EXPONENT_KEYS:
            value = getattr(self, key)
            if value is not None:
                values[key] = value
        return values

    @property
    def label(self) -> str:
        """Provenance with exponents, e.g. "Cor2(gamma=1.5, p=2)"."""
        args = ", ".join(
            f"{k}={v:g}" for k, v in self.exponents().items() if k != "scheme"
        )
        return f"{self.provenance}({args})"


@dataclass(frozen=True)
class SolverSettings:
    """Eigenvalue search settings.

    ``search_box`` is (re_min, re_max, im_min, im_max); when omitted the box
    is |Re|, |Im| <= 10 R_max capped at ``search_cap``.
    """

    bc: str = "dirichlet"
    truncation_length: float | None = None
    search_box: tuple[float, float, float, float] | None = None
    search_cap: float = 1e3
    margin: float = 1e-3
    tolerance: float = 1e-10
    max_count: int = 50


@dataclass(frozen=True)
class OutputSettings:
    """Report destinations and sampling."""

    directory: str = "results"
    formats: tuple[str, ...] = FORMATS
    theta_points: int = 720
    exclusion: float = 1e-3
    seed: int = 0
    log_scale: bool = False


@dataclass(frozen=True)
class PotentialSettings:
    """Raw ``[potential]`` table and the directory sample files resolve against."""

    table: dict[str, Any] = field(default_factory=lambda: {"kind": "zero"})
    base_dir: str = "."


@dataclass(frozen=True)
class CampaignConfig:
    """Parsed configuration document."""

    potential: PotentialSettings
    bounds: tuple[BoundSpec, ...]
    solver: SolverSettings
    output: OutputSettings


def _settings(cls: type, table: Mapping[str, Any], section: str) -> Any:  # noqa: ANN401
    known = {f.name for f in fields(cls)}
    unknown = set(table) - known
    if unknown:
        msg = f"Unknown keys in [{section}]: {sorted(unknown)}."
        raise ConfigError(msg)
    values = dict(table)
    for key in ("search_box", "formats"):
        if key in values and values[key] is not None:
            values[key] = tuple(values[key])
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        msg = f"Invalid [{section}] section: {exc}"
        raise ConfigError(msg) from exc


def expand_bounds(table: Mapping[str, Any]) -> list[BoundSpec]:
    """Expand one ``[[bounds]]`` entry whose exponents may be lists into a grid."""
    if "provenance" not in table:
        msg = "Every [[bounds]] entry needs a 'provenance'."
        raise ConfigError(msg)
    unknown = set(table) - {"provenance", "scheme", *EXPONENT_KEYS}
    if unknown:
        msg = f"Unknown keys in [[bounds]]: {sorted(unknown)}."
        raise ConfigError(msg)
    grid_keys = [k for k in EXPONENT_KEYS if isinstance(table.get(k), list)]
    base = {k: v for k, v in table.items() if k not in grid_keys}
    specs = []
    for combo in itertools.product(*(table[k] for k in grid_keys)):
        values = {**base, **dict(zip(grid_keys, combo, strict=True))}
        for key in EXPONENT_KEYS:
            if key in values:
                values[key] = float(values[key])
        specs.append(BoundSpec(**values))
    return specs


def parse_config(document: Mapping[str, Any], base_dir: str | Path = ".") -> CampaignConfig:
    """Validate a configuration mapping.

    Parameters
    ----------
    document : Mapping
        Sections ``potential``, ``bounds``, ``solver`` and ``output``.
    base_dir : str or Path, default = "."
        Directory that relative sample paths resolve against.

    Returns
    -------
    config : CampaignConfig
        Settings with every omitted value at its documented default.
    """
    unknown = set(document) - {"potential", "bounds", "solver", "output"}
    if unknown:
        msg = f"Unknown sections: {sorted(unknown)}."
        raise ConfigError(msg)
    potential = dict(document.get("potential", {"kind": "zero"}))
    if "kind" not in potential:
        msg = "The [potential] section needs a 'kind'."
        raise ConfigError(msg)
    bounds_tables = document.get("bounds", [])
    if isinstance(bounds_tables, dict):
        bounds_tables = [bounds_tables]
    bounds = tuple(spec for entry in bounds_tables for spec in expand_bounds(entry))
    solver = _settings(SolverSettings, document.get("solver", {}), "solver")
    output = _settings(OutputSettings, document.get("output", {}), "output")
    if solver.search_box is not None and len(solver.search_box) != BOX_CORNERS:
        msg = f"search_box needs 4 numbers, got {solver.search_box}."
        raise ConfigError(msg)
    bad = set(output.formats) - set(FORMATS)
    if bad:
        msg = f"Unknown output formats {sorted(bad)}, expected a subset of {FORMATS}."
        raise ConfigError(msg)
    if not (solver.margin > 0 and solver.tolerance > 0 and solver.max_count > 0):
        msg = "Solver margin, tolerance and max_count should be positive."
        raise ConfigError(msg)
    if not math.isfinite(solver.search_cap) or solver.search_cap <= 0:
        msg = f"search_cap should be positive and finite, got {solver.search_cap}."
        raise ConfigError(msg)
    return CampaignConfig(
        PotentialSettings(potential, str(base_dir)), bounds, solver, output
    )


def load_config(path: str | Path) -> CampaignConfig:
    """Read and validate a TOML configuration file."""
    path = Path(path)
    try:
        with path.open("rb") as handle:
            document = tomllib.load(handle)
    except OSError as exc:
        msg = f"Could not read configuration {path}: {exc}"
        raise ConfigError(msg) from exc
    except tomllib.TOMLDecodeError as exc:
        msg = f"Malformed configuration {path}: {exc}"
        raise ConfigError(msg) from exc
    logger.debug("Loaded configuration from %s", path)
    return parse_config(document, path.parent)


def with_overrides(config: CampaignConfig, **output: Any) -> CampaignConfig:  # noqa: ANN401
    """Replace output settings given on the command line; ``None`` keeps the file value."""
    changes = {k: v for k, v in output.items() if v is not None}
    if not changes:
        return config
    return replace(config, output=replace(config.output, **changes))
