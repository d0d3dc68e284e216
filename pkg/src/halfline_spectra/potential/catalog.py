"""Module for building potentials from configuration tables and sample files."""

from __future__ import annotations

import itertools
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from halfline_spectra.exceptions import ConfigError
from halfline_spectra.potential.potential import (
    ExponentialPotential,
    ExponentialSum,
    Potential,
    PowerDecay,
    SampledPotential,
    SquareWell,
    TailKind,
    ZeroPotential,
)

if TYPE_CHECKING:
    from collections.abc import Mapping

logger = logging.getLogger(__name__)

FAMILIES: dict[str, type[Potential]] = {
    "zero": ZeroPotential,
    "exponential": ExponentialPotential,
    "square_well": SquareWell,
    "power": PowerDecay,
    "exponential_sum": ExponentialSum,
}


def read_sample_file(
    path: str | Path,
    tail_rate: float = 1.0,
    tail_kind: str = "exponential",
) -> SampledPotential:
    """Load a sampled potential from plain text.

    Two columns are read as (x, Re q), three as (x, Re q, Im q). Lines
    starting with ``#`` are skipped.
    """
    path = Path(path)
    try:
        data = np.loadtxt(path, dtype=float, comments="#", ndmin=2)
    except (OSError, ValueError) as exc:
        msg = f"Could not read sample file {path}: {exc}"
        raise ConfigError(msg) from exc
    if data.shape[1] not in (2, 3):
        msg = f"Sample file {path} should have 2 or 3 columns, got {data.shape[1]}."
        raise ConfigError(msg)
    values = data[:, 1] + (1j * data[:, 2] if data.shape[1] == 3 else 0)  # noqa: PLR2004
    try:
        return SampledPotential(
            data[:, 0], values, tail_rate, TailKind(tail_kind), source=str(path)
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _coerce_complex(value: Any) -> complex:  # noqa: ANN401
    if isinstance(value, (list, tuple)):
        if len(value) != 2:  # noqa: PLR2004
            msg = f"Complex values are written as [re, im], got {value!r}."
            raise ConfigError(msg)
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def potential_from_config(
    table: Mapping[str, Any], base_dir: str | Path = "."
) -> Potential:
    """Build one potential from a ``[potential]`` table.

    Parameters
    ----------
    table : Mapping
        Keys ``kind``, ``parameters`` and, for ``kind = "sampled"``,
        ``sample_file``, ``tail_rate`` and ``tail_kind``. An optional
        ``support_hint`` replaces the radius the eigenvalue solvers
        truncate at.
    base_dir : str or Path, default = "."
        Directory that relative sample paths are resolved against.

    Returns
    -------
    potential : Potential
        The configured potential.

    Raises
    ------
    ConfigError
        For unknown kinds, invalid parameters or a ``support_hint`` that
        is not a positive finite number.
    """
    potential = _build_potential(table, base_dir)
    if "support_hint" not in table:
        return potential
    radius = table["support_hint"]
    try:
        return potential.with_support(float(radius))
    except (TypeError, ValueError) as exc:
        msg = f"Invalid support_hint {radius!r}: {exc}"
        raise ConfigError(msg) from exc


def _build_potential(table: Mapping[str, Any], base_dir: str | Path) -> Potential:
    kind = str(table.get("kind", "")).lower()
    params = dict(table.get("parameters", {}))
    if kind == "sampled":
        sample = table.get("sample_file")
        if sample is None:
            msg = "Sampled potentials need a 'sample_file'."
            raise ConfigError(msg)
        path = Path(sample)
        if not path.is_absolute():
            path = Path(base_dir) / path
        return read_sample_file(
            path,
            float(table.get("tail_rate", 1.0)),
            str(table.get("tail_kind", "exponential")),
        )
    if kind not in FAMILIES:
        msg = f"Unknown potential kind '{kind}', expected one of {sorted(FAMILIES)} or 'sampled'."
        raise ConfigError(msg)
    if kind == "exponential_sum":
        params["coefficients"] = tuple(
            _coerce_complex(c) for c in params.get("coefficients", ())
        )
    try:
        return FAMILIES[kind](**params)
    except (TypeError, ValueError) as exc:
        msg = f"Invalid parameters for '{kind}': {exc}"
        raise ConfigError(msg) from exc


def build_family(
    table: Mapping[str, Any], base_dir: str | Path = "."
) -> list[tuple[dict[str, Any], Potential]]:
    """Expand ``[potential.grid]`` into the cartesian product of parameter values.

    Returns
    -------
    family : list of (dict, Potential)
        Parameters of every member, in grid order, with the potential.
    """
    grid = dict(table.get("grid", {}))
    if not grid:
        potential = potential_from_config(table, base_dir)
        return [(potential.parameters, potential)]
    names = sorted(grid)
    members = []
    for combo in itertools.product(*(grid[name] for name in names)):
        params = {**table.get("parameters", {}), **dict(zip(names, combo, strict=True))}
        member = {**table, "parameters": params}
        members.append((params, potential_from_config(member, base_dir)))
    logger.debug("Built a family of %d potentials over %s.", len(members), names)
    return members
