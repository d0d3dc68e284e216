"""Collection of tests of harness module."""

from __future__ import annotations

import json
import math
import typing

import pytest

from halfline_spectra.enclosure import BoundSelector, Provenance, enclosure_region, theta_grid
from halfline_spectra.exceptions import ConfigError, InadmissibleExponentsError
from halfline_spectra.harness import (
    BoundSpec,
    Campaign,
    OutputSettings,
    Panel,
    SolverSettings,
    VerificationRecord,
    check_admissible,
    expand_bounds,
    exponent_sweep,
    load_config,
    parse_config,
    read_records_csv,
    render_panel,
    render_report,
    run_campaign,
    summarize,
    with_printed_variants,
)
from halfline_spectra.harness.cli import main
from halfline_spectra.harness.report import write_records_csv
from halfline_spectra.potential import ZeroPotential, build_family
from halfline_spectra.resolvent import BoundaryCondition

if typing.TYPE_CHECKING:
    from pathlib import Path

    from halfline_spectra.potential import SquareWell

square_well_table = {"kind": "square_well", "parameters": {"v0": 2.0, "width": 2.0}}
negative_box = (-3.0, -0.01, -0.5, 0.5)
quick_output = OutputSettings(theta_points=73)

config_text = """
[potential]
kind = "square_well"

[potential.parameters]
v0 = 2.0
width = 2.0

[[bounds]]
provenance = "Thm2"

[[bounds]]
provenance = "Rem1"
gamma = [1.0, 1.5]

[solver]
search_box = [-3.0, -0.01, -0.5, 0.5]

[output]
theta_points = 73
formats = ["csv", "json"]
"""


def _campaign(radius_scale: float = 1.0) -> Campaign:
    return Campaign(
        build_family(square_well_table),
        (BoundSpec("Thm2"),),
        BoundaryCondition.dirichlet(),
        SolverSettings(search_box=negative_box),
        quick_output,
        radius_scale,
    )


def test_bound_spec_label() -> None:
    """Labels list the exponents in a fixed order."""
    if BoundSpec("Cor2", gamma=1.5).label != "Cor2(p=2, gamma=1.5, constant=1)":
        msg = f"Unexpected label {BoundSpec('Cor2', gamma=1.5).label}."
        raise ValueError(msg)


def test_expand_bounds_grid() -> None:
    """List-valued exponents expand into their product."""
    specs = expand_bounds({"provenance": "Cor2", "gamma": [1.0, 1.5], "p": [2, 3]})
    pairs = [(spec.p, spec.gamma) for spec in specs]
    if pairs != [(2.0, 1.0), (2.0, 1.5), (3.0, 1.0), (3.0, 1.5)]:
        msg = f"Unexpected grid {pairs}."
        raise ValueError(msg)
    with pytest.raises(ConfigError, match="provenance"):
        expand_bounds({"gamma": 1.0})
    with pytest.raises(ConfigError, match="Unknown keys"):
        expand_bounds({"provenance": "Cor2", "delta": 1.0})


@pytest.mark.parametrize(
    ("document", "match"),
    [
        ({"solver": {"bogus": 1}}, "Unknown keys"),
        ({"output": {"formats": ["pdf"]}}, "Unknown output formats"),
        ({"potential": {}}, "kind"),
        ({"plots": {}}, "Unknown sections"),
        ({"solver": {"search_box": [0.0, 1.0]}}, "search_box"),
        ({"solver": {"margin": 0.0}}, "positive"),
    ],
)
def test_parse_config_errors(document: dict[str, typing.Any], match: str) -> None:
    """Malformed documents are configuration errors."""
    with pytest.raises(ConfigError, match=match):
        parse_config(document)


def test_parse_config_defaults() -> None:
    """An empty document is the zero potential with default settings."""
    config = parse_config({})
    if config.potential.table != {"kind": "zero"} or config.bounds:
        msg = "Empty document should give the zero potential and no estimates."
        raise ValueError(msg)
    if config.solver != SolverSettings() or config.output != OutputSettings():
        msg = "Empty document should keep the default settings."
        raise ValueError(msg)


def test_load_config(tmp_path: Path) -> None:
    """TOML documents are read relative to their directory."""
    path = tmp_path / "campaign.toml"
    path.write_text(config_text, encoding="utf-8")
    config = load_config(path)
    if [spec.label for spec in config.bounds] != [
        "Thm2(p=2, constant=1)",
        "Rem1(p=2, gamma=1, constant=1)",
        "Rem1(p=2, gamma=1.5, constant=1)",
    ]:
        msg = f"Unexpected estimates {config.bounds}."
        raise ValueError(msg)
    if config.solver.search_box != negative_box or config.potential.base_dir != str(tmp_path):
        msg = "Solver box or base directory was not read."
        raise ValueError(msg)
    broken = tmp_path / "broken.toml"
    broken.write_text("[potential\nkind = 1", encoding="utf-8")
    with pytest.raises(ConfigError, match="Malformed"):
        load_config(broken)
    with pytest.raises(ConfigError, match="Could not read"):
        load_config(tmp_path / "missing.toml")


def test_check_admissible() -> None:
    """Gates run before any potential is known."""
    with pytest.raises(InadmissibleExponentsError, match="Dirichlet"):
        check_admissible(BoundSpec("Thm2"), BoundaryCondition.neumann())
    with pytest.raises(InadmissibleExponentsError, match="'r'"):
        check_admissible(BoundSpec("Thm1"))
    with pytest.raises(ValueError):  # noqa: PT011
        check_admissible(BoundSpec("Cor1", r=2.0))
    check_admissible(BoundSpec("Thm4"), BoundaryCondition.neumann())
    check_admissible(BoundSpec("Cor2", gamma=1.5))


def test_zero_potential_campaign() -> None:
    """No eigenvalues give no records and a vacuous pass."""
    campaign = Campaign(
        [({}, ZeroPotential())],
        (BoundSpec("Thm2"),),
        BoundaryCondition.dirichlet(),
        SolverSettings(),
        quick_output,
    )
    records = run_campaign(campaign)
    summary = summarize(records)
    if records or not summary["vacuous_pass"] or summary["verdict"] != "pass":
        msg = f"Free operator campaign should pass vacuously, got {summary}."
        raise ValueError(msg)


def test_square_well_campaign(square_well_dirichlet_eigenvalue: float) -> None:
    """The Dirichlet eigenvalue lies inside its enclosure."""
    records = run_campaign(_campaign())
    if len(records) != 1:
        msg = f"Expected one record, got {records}."
        raise ValueError(msg)
    rec = records[0]
    if rec.lam != pytest.approx(square_well_dirichlet_eigenvalue, abs=1e-8):
        msg = f"Record eigenvalue {rec.lam} is wrong."
        raise ValueError(msg)
    if not rec.passed or rec.radius != pytest.approx(4.0, rel=1e-9):
        msg = f"Enclosure of radius {rec.radius} should contain {rec.lam}."
        raise ValueError(msg)
    if summarize(records)["verdict"] != "pass":
        msg = "Campaign should pass."
        raise ValueError(msg)


def test_weakened_campaign_fails() -> None:
    """Shrinking every radius tenfold makes the check fail."""
    records = run_campaign(_campaign(radius_scale=0.1))
    summary = summarize(records)
    if summary["verdict"] != "fail" or summary["failed"] != 1:
        msg = f"Weakened estimates should fail, got {summary}."
        raise ValueError(msg)
    if summary["per_provenance"]["Thm2"]["worst_margin"] >= 0:
        msg = "The failing margin should be negative."
        raise ValueError(msg)


def test_neumann_campaign(square_well_neumann_eigenvalue: float) -> None:
    """Robin estimates enclose the Neumann eigenvalue."""
    campaign = Campaign(
        build_family(square_well_table),
        (BoundSpec("Thm3", r=4.0), BoundSpec("Thm4")),
        BoundaryCondition.neumann(),
        SolverSettings(bc="neumann", search_box=negative_box),
        quick_output,
    )
    records = run_campaign(campaign)
    if [r.provenance for r in records] != ["Thm3", "Thm4", "Thm4Printed"]:
        msg = f"Expected one record per estimate, got {records}."
        raise ValueError(msg)
    for rec in records:
        if rec.lam != pytest.approx(square_well_neumann_eigenvalue, abs=1e-8):
            msg = f"Record eigenvalue {rec.lam} is not the Neumann eigenvalue."
            raise ValueError(msg)
        if not rec.passed:
            msg = f"{rec.provenance} radius {rec.radius} misses {rec.lam}."
            raise ValueError(msg)


def test_printed_variant_reported(tmp_path: Path) -> None:
    """Thm4 brings its printed twin, written to CSV but kept out of the verdict."""
    campaign = Campaign(
        build_family(square_well_table),
        (BoundSpec("Thm4", p=4.0),),
        BoundaryCondition.dirichlet(),
        SolverSettings(search_box=negative_box),
        quick_output,
    )
    records = run_campaign(campaign)
    holder, printed = records
    if (holder.provenance, printed.provenance) != ("Thm4", "Thm4Printed"):
        msg = f"Expected Thm4 then Thm4Printed, got {records}."
        raise ValueError(msg)
    if "printed" not in printed.flags or printed.counts or not holder.counts:
        msg = "Only the Hoelder variant should enter the verdict."
        raise ValueError(msg)
    if not printed.radius < holder.radius:  # type: ignore[operator]
        msg = f"For p = 4 the printed radius {printed.radius} is the smaller one."
        raise ValueError(msg)
    path = write_records_csv(records, tmp_path / "records.csv")
    if [r.provenance for r in read_records_csv(path)] != ["Thm4", "Thm4Printed"]:
        msg = "Both variants should be written to the records file."
        raise ValueError(msg)
    if with_printed_variants((BoundSpec("Thm4"), BoundSpec("Thm4Printed"))) != (
        BoundSpec("Thm4"),
        BoundSpec("Thm4Printed"),
    ):
        msg = "A listed printed variant should not be added twice."
        raise ValueError(msg)


def test_campaign_jobs_do_not_change_records() -> None:
    """Threaded campaigns keep the record order."""
    family = build_family(
        {
            "kind": "square_well",
            "parameters": {"width": 2.0},
            "grid": {"v0": [2.0, 3.0]},
        }
    )
    campaign = Campaign(
        family,
        (BoundSpec("Thm2"), BoundSpec("Rem1", gamma=1.5)),
        BoundaryCondition.dirichlet(),
        SolverSettings(search_box=(-4.0, -0.01, -0.5, 0.5)),
        quick_output,
    )
    serial = run_campaign(campaign)
    threaded = run_campaign(campaign, jobs=2)
    if [(r.potential_index, r.provenance) for r in serial] != [
        (r.potential_index, r.provenance) for r in threaded
    ]:
        msg = "Record order depends on the number of jobs."
        raise ValueError(msg)
    if not all(r.passed for r in serial):
        msg = "Both estimates should enclose the square well eigenvalues."
        raise ValueError(msg)


def test_records_csv(tmp_path: Path) -> None:
    """Records survive the CSV file unchanged."""
    records = [
        VerificationRecord(
            0,
            {"v0": 2.0},
            "Thm2",
            {"scheme": "sqrt", "p": 2.0},
            complex(-0.75, 1e-17),
            3.5e-12,
            "shooting",
            4.0,
            3.25,
            passed=True,
        ),
        VerificationRecord(
            1,
            {"v0": 3.0},
            "Thm5Weak",
            {"r": 3.0},
            -1.0,
            None,
            "shooting",
            0.5,
            -0.5,
            passed=False,
            flags=("unscaled",),
        ),
        VerificationRecord(2, {}, "Cor2", {"gamma": 1.0}, skipped="NormDivergesError: x"),
    ]
    path = write_records_csv(records, tmp_path / "records.csv")
    if read_records_csv(path) != records:
        msg = "Records changed on the way through CSV."
        raise ValueError(msg)
    summary = summarize(records)
    if summary["verdict"] != "pass" or summary["skipped"] != 1 or summary["checked"] != 2:
        msg = f"Unscaled failures should not decide the verdict, got {summary}."
        raise ValueError(msg)


def test_render_panel(tmp_path: Path, square_well_dirichlet_eigenvalue: float) -> None:
    """Regions, eigenvalues and the essential spectrum are tagged in the SVG."""
    region = enclosure_region(
        BoundSelector(Provenance.THM2, {"norms": (2.0, 2.0)}), theta_grid(73)
    )
    ray = enclosure_region(BoundSelector(Provenance.REM1, {"integral": 1.0, "gamma": 1.5}))
    panel = Panel(
        0,
        {"v0": 2.0},
        [("Thm2", region), ("Rem1", ray)],
        [complex(square_well_dirichlet_eigenvalue, 0.0)],
    )
    text = render_panel(panel, tmp_path / "panel.svg").read_text(encoding="utf-8")
    for gid in ('id="region-0"', 'id="region-1"', 'id="eigenvalue-0"', 'id="essential-spectrum"'):
        if text.count(gid) != 1:
            msg = f"SVG should contain {gid} once."
            raise ValueError(msg)
    log_text = render_panel(panel, tmp_path / "log.svg", log_scale=True).read_text(
        encoding="utf-8"
    )
    if "log(1 + |lam|)" not in log_text:
        msg = "Logarithmic plots should label their axes."
        raise ValueError(msg)


def test_render_report(tmp_path: Path) -> None:
    """Empty campaigns still write a summary."""
    paths = render_report([], tmp_path / "out", seed=7)
    names = sorted(path.name for path in paths)
    if names != ["records.csv", "summary.json"]:
        msg = f"Unexpected report files {names}."
        raise ValueError(msg)
    summary = json.loads((tmp_path / "out" / "summary.json").read_text(encoding="utf-8"))
    if not summary["vacuous_pass"] or summary["seed"] != 7:
        msg = f"Unexpected summary {summary}."
        raise ValueError(msg)


def test_exponent_sweep(square_well: SquareWell) -> None:
    """Inadmissible entries carry a reason; the smallest radius is flagged."""
    grid = [{"gamma": 0.25}, {"gamma": 1.0}, {"gamma": 1.5}, {"gamma": 2.0}]
    rows = exponent_sweep(square_well, BoundSpec("Rem1"), grid, math.pi)
    if rows[0].admissible or not rows[0].reason or rows[0].radius is not None:
        msg = "gamma = 0.25 should be inadmissible."
        raise ValueError(msg)
    radii = [row.radius for row in rows[1:]]
    minimal = [row for row in rows if row.minimal]
    if None in radii or len(minimal) != 1 or minimal[0].radius != min(radii):
        msg = f"Exactly the smallest radius should be minimal, got {rows}."
        raise ValueError(msg)


def test_cli_gfun(tmp_path: Path) -> None:
    """Tabulating g writes CSV and JSON."""
    code = main(["gfun", "--points", "5", "--out", str(tmp_path)])
    if code != 0:
        msg = f"gfun should exit with 0, got {code}."
        raise ValueError(msg)
    table = json.loads((tmp_path / "gfun.json").read_text(encoding="utf-8"))
    if len(table) != 5 or not (tmp_path / "gfun.csv").exists():
        msg = "gfun should write five rows."
        raise ValueError(msg)
    if table[2]["g"] != pytest.approx(1.0):
        msg = "The middle row is g(0) = 1."
        raise ValueError(msg)
    robin = tmp_path / "robin"
    code = main(["gfun", "--points", "5", "--sigma", "0", "--out", str(robin)])
    rows = json.loads((robin / "gfun.json").read_text(encoding="utf-8"))
    if code != 0 or set(rows[0]) != {"a", "g_sigma", "maximizer_y"}:
        msg = f"Robin gfun should report the maximizer, got {rows[0]}."
        raise ValueError(msg)
    if any(row["maximizer_y"] != 0.0 or row["g_sigma"] != pytest.approx(2.0) for row in rows):
        msg = "Neumann g_sigma is 2, attained at y = 0."
        raise ValueError(msg)


def test_cli_verify(tmp_path: Path) -> None:
    """verify exits with the campaign verdict."""
    out = tmp_path / "zero"
    if main(["verify", "--out", str(out)]) != 0:
        msg = "The default campaign should pass."
        raise ValueError(msg)
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    if not summary["vacuous_pass"]:
        msg = "The default campaign should pass vacuously."
        raise ValueError(msg)
    path = tmp_path / "campaign.toml"
    path.write_text(config_text, encoding="utf-8")
    if main(["verify", "--config", str(path), "--out", str(tmp_path / "well")]) != 0:
        msg = "The square well campaign should pass."
        raise ValueError(msg)
    records = read_records_csv(tmp_path / "well" / "records.csv")
    if len(records) != 3 or not all(r.passed for r in records):
        msg = f"Expected three passing records, got {records}."
        raise ValueError(msg)


def test_cli_exit_codes(tmp_path: Path) -> None:
    """Configuration errors exit with 2, kernel checks pass with 0."""
    bad = tmp_path / "bad.toml"
    bad.write_text('[potential]\nkind = "gaussian"\n', encoding="utf-8")
    if main(["verify", "--config", str(bad), "--out", str(tmp_path)]) != 2:
        msg = "An unknown potential kind should exit with 2."
        raise ValueError(msg)
    code = main(["kernel-check", "--samples", "5", "--out", str(tmp_path), "--seed", "3"])
    if code != 0 or not (tmp_path / "kernel_check.csv").exists():
        msg = f"kernel-check should pass, got {code}."
        raise ValueError(msg)


acceptance_box = (-25.0, 25.0, -25.0, 25.0)
acceptance_output = OutputSettings(theta_points=361)


def _check_acceptance(records: list[VerificationRecord]) -> None:
    counted = [r for r in records if r.counts]
    if not counted:
        msg = "The campaign should verify at least one eigenvalue."
        raise ValueError(msg)
    missed = [r for r in counted if not r.passed]
    if missed:
        msg = f"{len(missed)} eigenvalues escape their enclosures: {missed[:3]}."
        raise ValueError(msg)


@pytest.mark.slow
@pytest.mark.parametrize("phi", [0.0, math.pi / 6, math.pi / 4, math.pi / 2])
def test_exponential_acceptance_campaign(phi: float) -> None:
    """Sqrt-split estimates enclose every eigenvalue of c exp(i phi) exp(-x), |c| <= 10."""
    family = build_family(
        {
            "kind": "exponential",
            "parameters": {"phi": phi},
            "grid": {"c": [-float(c) for c in range(1, 11)]},
        }
    )
    bounds = (
        BoundSpec("Thm2"),
        *expand_bounds({"provenance": "Cor2", "gamma": [0.75, 1.0, 1.5, 2.0]}),
    )
    campaign = Campaign(
        family,
        bounds,
        BoundaryCondition.dirichlet(),
        SolverSettings(search_box=acceptance_box),
        acceptance_output,
    )
    _check_acceptance(run_campaign(campaign, jobs=2))


@pytest.mark.slow
def test_robin_acceptance_campaign() -> None:
    """Robin estimates at sigma = 1 enclose every eigenvalue of rotated wells."""
    family = build_family(
        {
            "kind": "exponential",
            "parameters": {"c": -5.0},
            "grid": {"c": [-5.0, -10.0], "phi": [0.0, math.pi / 6, math.pi / 4]},
        }
    )
    campaign = Campaign(
        family,
        (BoundSpec("Thm3", r=4.0), BoundSpec("Thm4")),
        BoundaryCondition(1.0),
        SolverSettings(bc="1.0", search_box=acceptance_box),
        acceptance_output,
    )
    records = run_campaign(campaign, jobs=2)
    if {r.provenance for r in records if not r.is_skipped} != {"Thm3", "Thm4", "Thm4Printed"}:
        msg = "Every Robin estimate should be checked."
        raise ValueError(msg)
    _check_acceptance(records)
