"""Module for campaign reports: CSV records, JSON summary and SVG plots."""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
from matplotlib.figure import Figure

from halfline_spectra.harness.campaign import VerificationRecord

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from halfline_spectra.harness.campaign import Panel

logger = logging.getLogger(__name__)

CSV_NAME = "records.csv"
SUMMARY_NAME = "summary.json"
SVG_NAME = "potential-{index:03d}.svg"
AUTOSCALE = 1.2
COLUMNS = (
    "potential_index",
    "potential_params",
    "provenance",
    "bound_parameters",
    "lam_re",
    "lam_im",
    "residual",
    "method",
    "radius",
    "margin",
    "passed",
    "flags",
    "skipped",
)


def _number(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _parse_number(text: str) -> float | None:
    return None if text == "" else float(text)


def write_records_csv(records: Iterable[VerificationRecord], path: str | Path) -> Path:
    """Write one record per row; floats keep their full repr."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(COLUMNS)
        for rec in records:
            writer.writerow(
                [
                    rec.potential_index,
                    json.dumps(rec.potential_params, sort_keys=True),
                    rec.provenance,
                    json.dumps(rec.bound_parameters, sort_keys=True),
                    _number(None if rec.lam is None else rec.lam.real),
                    _number(None if rec.lam is None else rec.lam.imag),
                    _number(rec.residual),
                    rec.method or "",
                    _number(rec.radius),
                    _number(rec.margin),
                    int(rec.passed),
                    "|".join(rec.flags),
                    rec.skipped,
                ]
            )
    return path


def read_records_csv(path: str | Path) -> list[VerificationRecord]:
    """Parse a file written by ``write_records_csv`` back into records."""
    records = []
    with Path(path).open(newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            re_part = _parse_number(row["lam_re"])
            im_part = _parse_number(row["lam_im"])
            lam = None if re_part is None else complex(re_part, im_part or 0.0)
            records.append(
                VerificationRecord(
                    potential_index=int(row["potential_index"]),
                    potential_params=json.loads(row["potential_params"]),
                    provenance=row["provenance"],
                    bound_parameters=json.loads(row["bound_parameters"]),
                    lam=lam,
                    residual=_parse_number(row["residual"]),
                    method=row["method"] or None,
                    radius=_parse_number(row["radius"]),
                    margin=_parse_number(row["margin"]),
                    passed=bool(int(row["passed"])),
                    flags=tuple(row["flags"].split("|")) if row["flags"] else (),
                    skipped=row["skipped"],
                )
            )
    return records


def _finite_or_none(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return value


def summarize(
    records: Sequence[VerificationRecord],
    seed: int | None = None,
    constants: dict[str, float] | None = None,
) -> dict[str, Any]:
    """Pass counts and worst margins per provenance.

    ``vacuous_pass`` is set when no record was verified at all.
    """
    checked = [r for r in records if not r.is_skipped]
    per_provenance: dict[str, dict[str, Any]] = {}
    for rec in checked:
        entry = per_provenance.setdefault(
            rec.provenance, {"passed": 0, "failed": 0, "worst_margin": None}
        )
        entry["passed" if rec.passed else "failed"] += 1
        worst = entry["worst_margin"]
        if rec.margin is not None and (worst is None or rec.margin < worst):
            entry["worst_margin"] = rec.margin
    for entry in per_provenance.values():
        entry["worst_margin"] = _finite_or_none(entry["worst_margin"])
    failures = [r for r in records if r.counts and not r.passed]
    return {
        "records": len(records),
        "checked": len(checked),
        "skipped": len(records) - len(checked),
        "passed": sum(r.passed for r in checked),
        "failed": len(failures),
        "vacuous_pass": not checked,
        "verdict": "fail" if failures else "pass",
        "per_provenance": per_provenance,
        "empirical_constants": constants or {},
        "seed": seed,
    }


def _curve(radii: np.ndarray, thetas: np.ndarray, *, log_scale: bool) -> np.ndarray:
    modulus = np.log1p(radii) if log_scale else radii
    return modulus * np.exp(1j * thetas)


def render_panel(panel: Panel, path: str | Path, *, log_scale: bool = False) -> Path:
    """Draw the regions, eigenvalues and essential spectrum of one potential.

    Regions are closed curves with SVG ids ``region-<k>``, eigenvalues are
    markers ``eigenvalue-<k>`` and [0, inf) is the ray ``essential-spectrum``.
    Ray-only estimates are drawn as a segment of the negative axis.
    """
    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot()
    extent = 0.0
    for k, (label, region) in enumerate(panel.regions):
        if region.ray_radius is not None:
            end = _curve(np.array([region.ray_radius]), np.array([math.pi]), log_scale=log_scale)
            ax.plot([0.0, end[0].real], [0.0, 0.0], lw=3, label=label, gid=f"region-{k}")
            extent = max(extent, abs(end[0]))
            continue
        finite = np.isfinite(region.radii)
        z = _curve(region.radii[finite], region.thetas[finite], log_scale=log_scale)
        if z.size == 0:
            continue
        z = np.append(z, z[0])
        ax.plot(z.real, z.imag, label=label, gid=f"region-{k}")
        extent = max(extent, float(np.max(np.abs(z))))
    for k, lam in enumerate(panel.eigenvalues):
        z = _curve(np.array([abs(lam)]), np.array([np.angle(lam)]), log_scale=log_scale)[0]
        ax.plot([z.real], [z.imag], "kx", gid=f"eigenvalue-{k}")
        extent = max(extent, abs(z))
    extent = AUTOSCALE * (extent or 1.0)
    ax.plot([0.0, extent], [0.0, 0.0], "k-", lw=1, gid="essential-spectrum")
    ax.set_xlim(-extent, extent)
    ax.set_ylim(-extent, extent)
    ax.set_aspect("equal")
    ax.set_xlabel("log(1 + |lam|) cos(theta)" if log_scale else "Re lam")
    ax.set_ylabel("log(1 + |lam|) sin(theta)" if log_scale else "Im lam")
    ax.set_title(json.dumps(panel.params, sort_keys=True))
    if panel.regions:
        ax.legend(loc="upper left", fontsize="small")
    path = Path(path)
    fig.savefig(path, format="svg")
    return path


def render_report(  # noqa: PLR0913
    records: Sequence[VerificationRecord],
    directory: str | Path,
    formats: Iterable[str] = ("csv", "json", "svg"),
    *,
    panels: Sequence[Panel] = (),
    seed: int | None = None,
    constants: dict[str, float] | None = None,
    log_scale: bool = False,
) -> list[Path]:
    """Write the requested report artifacts.

    Parameters
    ----------
    records : sequence of VerificationRecord
        Campaign output; may be empty, which yields a vacuous summary.
    directory : str or Path
        Created when missing.
    formats : iterable of {"csv", "json", "svg"}
        Artifacts to write.
    panels : sequence of Panel, default = ()
        Regions and eigenvalues per potential, one SVG each.
    seed : int, optional
        Seed recorded in the summary.
    constants : dict, optional
        Empirical interpolation constants recorded in the summary.
    log_scale : bool, default = False
        Logarithmic radial scale in the plots.

    Returns
    -------
    paths : list of Path
        Written files.

    Raises
    ------
    OSError
        If the directory cannot be written.
    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    formats = set(formats)
    paths = []
    if "csv" in formats:
        paths.append(write_records_csv(records, out / CSV_NAME))
    if "json" in formats:
        summary = summarize(records, seed, constants)
        target = out / SUMMARY_NAME
        target.write_text(json.dumps(summary, indent=2, sort_keys=True), encoding="utf-8")
        paths.append(target)
    if "svg" in formats:
        paths.extend(
            render_panel(panel, out / SVG_NAME.format(index=panel.index), log_scale=log_scale)
            for panel in panels
        )
    for path in paths:
        logger.info("Wrote %s", path)
    return paths
