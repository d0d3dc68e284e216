"""Command-line entry point ``halfline-spectra``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from halfline_spectra.eigensolver.contour import Rectangle, find_eigenvalues
from halfline_spectra.enclosure.region import enclosure_region, theta_grid
from halfline_spectra.exceptions import ConfigError, NumericalError
from halfline_spectra.harness.campaign import (
    Campaign,
    Panel,
    bound_selector,
    exponent_sweep,
    run_campaign_detailed,
)
from halfline_spectra.harness.config import (
    EXPONENT_KEYS,
    FORMATS,
    BoundSpec,
    CampaignConfig,
    OutputSettings,
    load_config,
    parse_config,
    with_overrides,
)
from halfline_spectra.harness.report import render_panel, render_report, summarize
from halfline_spectra.potential.catalog import build_family
from halfline_spectra.resolvent.resolvent import (
    BoundaryCondition,
    kernel_row_norm,
    spectral_point,
)
from halfline_spectra.specfun.specfun import g, g_sigma_eval

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
SLACK_TOLERANCE = -1e-9


def _config(args: argparse.Namespace) -> CampaignConfig:
    if args.config is None:
        return parse_config({})
    return load_config(args.config)


def _output(args: argparse.Namespace, config: CampaignConfig) -> OutputSettings:
    formats = tuple(args.format) if args.format else None
    return with_overrides(
        config, directory=args.out, formats=formats, seed=args.seed
    ).output


def _write_rows(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    logger.info("Wrote %s", path)
    return path


def _write_json(path: Path, payload: Any) -> Path:  # noqa: ANN401
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def _cli_bound(args: argparse.Namespace) -> BoundSpec | None:
    if args.bound is None:
        return None
    exponents = {k: getattr(args, k) for k in EXPONENT_KEYS if getattr(args, k) is not None}
    return BoundSpec(args.bound, args.scheme, **exponents)


def cmd_bounds(args: argparse.Namespace) -> int:
    """Enclosure regions of the configured potentials."""
    config = _config(args)
    output = _output(args, config)
    spec = _cli_bound(args)
    specs = (spec,) if spec is not None else config.bounds
    if not specs:
        msg = "No estimate given; use --bound or a [[bounds]] section."
        raise ConfigError(msg)
    bc = BoundaryCondition.parse(args.bc or config.solver.bc)
    overlay: list[complex] = []
    if args.eigenvalues:
        data = json.loads(Path(args.eigenvalues).read_text(encoding="utf-8"))
        overlay = [complex(e["re"], e["im"]) for item in data for e in item["eigenvalues"]]
    thetas = theta_grid(output.theta_points, output.exclusion)
    out = Path(output.directory)
    out.mkdir(parents=True, exist_ok=True)
    payload = []
    family = build_family(config.potential.table, config.potential.base_dir)
    for index, (params, q) in enumerate(family):
        panel = Panel(index, params, eigenvalues=overlay)
        rows = []
        for bound in specs:
            region = enclosure_region(bound_selector(q, bound, bc), thetas, jobs=args.jobs)
            panel.regions.append((bound.label, region))
            payload.append(
                {
                    "potential_index": index,
                    "bound": bound.label,
                    "flags": list(region.flags),
                    "ray_radius": region.ray_radius,
                    "thetas": region.thetas.tolist(),
                    "radii": [r if math.isfinite(r) else None for r in region.radii.tolist()],
                }
            )
            pairs = zip(region.thetas, region.radii, strict=True)
            rows.extend([bound.label, t, r] for t, r in pairs)
        if "csv" in output.formats:
            _write_rows(out / f"regions-{index:03d}.csv", ("bound", "theta", "radius"), rows)
        if "svg" in output.formats:
            render_panel(panel, out / f"regions-{index:03d}.svg", log_scale=output.log_scale)
    if "json" in output.formats:
        _write_json(out / "regions.json", payload)
    return EXIT_PASS


def cmd_eigs(args: argparse.Namespace) -> int:
    """Eigenvalues of the configured potentials in a search box."""
    config = _config(args)
    output = _output(args, config)
    solver = config.solver
    bc = BoundaryCondition.parse(args.bc or solver.bc)
    box_values = args.box or solver.search_box
    if box_values is None:
        cap = solver.search_cap
        box_values = (-cap, cap, -cap, cap)
    box = Rectangle(*box_values)
    out = Path(output.directory)
    out.mkdir(parents=True, exist_ok=True)
    payload = []
    rows = []
    family = build_family(config.potential.table, config.potential.base_dir)
    for index, (params, q) in enumerate(family):
        search = find_eigenvalues(
            q,
            box,
            bc,
            solver.max_count,
            truncation_length=solver.truncation_length,
            margin=solver.margin,
            tolerance=solver.tolerance,
            jobs=args.jobs,
        )
        entries = [
            {
                "re": e.lam.real,
                "im": e.lam.imag,
                "residual": e.residual,
                "method": e.method.value,
                "truncation_length": e.truncation_length,
                "bc": e.bc.label,
                "converged": e.converged,
            }
            for e in search
        ]
        payload.append(
            {
                "potential_index": index,
                "params": json.loads(json.dumps(params, default=lambda z: [z.real, z.imag])),
                "eigenvalues": entries,
                "truncated": search.truncated,
                "tail_neglected": search.tail_neglected,
                "discarded": [[z.real, z.imag] for z in search.discarded],
            }
        )
        rows.extend([index, e["re"], e["im"], e["residual"], e["converged"]] for e in entries)
    if "json" in output.formats:
        _write_json(out / "eigenvalues.json", payload)
    if "csv" in output.formats:
        header = ("potential_index", "re", "im", "residual", "converged")
        _write_rows(out / "eigenvalues.csv", header, rows)
    return EXIT_PASS


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the campaign of the configuration document."""
    config = _config(args)
    output = _output(args, config)
    campaign = Campaign.from_config(config)
    outcome = run_campaign_detailed(campaign, jobs=args.jobs)
    render_report(
        outcome.records,
        output.directory,
        output.formats,
        panels=outcome.panels,
        seed=output.seed,
        constants=outcome.constants,
        log_scale=output.log_scale,
    )
    summary = summarize(outcome.records, output.seed, outcome.constants)
    logger.info(
        "%d checked, %d failed, %d skipped",
        summary["checked"],
        summary["failed"],
        summary["skipped"],
    )
    return EXIT_FAIL if summary["verdict"] == "fail" else EXIT_PASS


def kernel_check_rows(samples: int, seed: int) -> list[list[float]]:
    """Random (lam, alpha, x) triples with the three row-norm values and the slack."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(samples):
        modulus = 10 ** rng.uniform(-2, 2)
        theta = rng.uniform(1e-3, 2 * math.pi - 1e-3)
        lam = modulus * complex(math.cos(theta), math.sin(theta))
        alpha = rng.uniform(1, 8)
        x = rng.uniform(0, 20)
        row = kernel_row_norm(x, spectral_point(lam), alpha)
        rows.append(
            [
                lam.real,
                lam.imag,
                alpha,
                x,
                row.quadrature,
                row.closed_form_bound,
                row.global_bound,
                row.slack,
            ]
        )
    return rows


def cmd_kernel_check(args: argparse.Namespace) -> int:
    """Check quadrature <= closed form <= global bound on random rows."""
    config = _config(args)
    output = _output(args, config)
    rows = kernel_check_rows(args.samples, output.seed)
    out = Path(output.directory)
    out.mkdir(parents=True, exist_ok=True)
    header = ("lam_re", "lam_im", "alpha", "x", "quadrature", "closed_form", "global", "slack")
    if "csv" in output.formats:
        _write_rows(out / "kernel_check.csv", header, rows)
    worst = min((row[-1] for row in rows), default=0.0)
    if "json" in output.formats:
        _write_json(
            out / "kernel_check.json",
            {"samples": len(rows), "worst_slack": worst, "seed": output.seed},
        )
    return EXIT_FAIL if worst < SLACK_TOLERANCE else EXIT_PASS


def cmd_gfun(args: argparse.Namespace) -> int:
    """Tabulate g or its Robin analogue."""
    config = _config(args)
    output = _output(args, config)
    a_values = np.linspace(args.a_min, args.a_max, args.points)
    if args.sigma is None:
        evals = [g(float(a)) for a in a_values]
        header: tuple[str, ...] = ("a", "g", "maximizer_y")
    else:
        mu = complex(args.mu_re, args.mu_im)
        evals = [g_sigma_eval(float(a), args.sigma, mu) for a in a_values]
        header = ("a", "g_sigma", "maximizer_y")
    rows = [[e.argument, e.value, e.maximizer_y] for e in evals]
    out = Path(output.directory)
    out.mkdir(parents=True, exist_ok=True)
    if "csv" in output.formats:
        _write_rows(out / "gfun.csv", header, rows)
    if "json" in output.formats:
        _write_json(out / "gfun.json", [dict(zip(header, row, strict=True)) for row in rows])
    return EXIT_PASS


def _grid(key: str, values: Sequence[str]) -> list[dict[str, float]]:
    names = key.split(",")
    grid = []
    for value in values:
        parts = value.split(",")
        if len(parts) != len(names):
            msg = f"Grid entry '{value}' does not match the keys '{key}'."
            raise ConfigError(msg)
        grid.append({n: float(v) for n, v in zip(names, parts, strict=True)})
    return grid


def cmd_sweep(args: argparse.Namespace) -> int:
    """Radius at one angle over an exponent grid."""
    config = _config(args)
    output = _output(args, config)
    spec = _cli_bound(args)
    if spec is None:
        msg = "The sweep needs --bound."
        raise ConfigError(msg)
    bc = BoundaryCondition.parse(args.bc or config.solver.bc)
    family = build_family(config.potential.table, config.potential.base_dir)
    out = Path(output.directory)
    out.mkdir(parents=True, exist_ok=True)
    payload = []
    rows = []
    for index, (_, q) in enumerate(family):
        table = exponent_sweep(q, spec, _grid(args.key, args.grid), args.theta, bc)
        for row in table:
            payload.append(
                {
                    "potential_index": index,
                    "exponents": row.exponents,
                    "radius": row.radius,
                    "admissible": row.admissible,
                    "minimal": row.minimal,
                    "reason": row.reason,
                }
            )
            rows.append(
                [
                    index,
                    json.dumps(row.exponents),
                    row.radius,
                    row.admissible,
                    row.minimal,
                    row.reason,
                ]
            )
    if "csv" in output.formats:
        header = ("potential_index", "exponents", "radius", "admissible", "minimal", "reason")
        _write_rows(out / "sweep.csv", header, rows)
    if "json" in output.formats:
        _write_json(out / "sweep.json", payload)
    return EXIT_PASS


def _add_bound_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bound", help="estimate, e.g. Thm2 or Cor2")
    parser.add_argument("--scheme", default="sqrt", help="sqrt, power or exp")
    for key in EXPONENT_KEYS:
        parser.add_argument(f"--{key}", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per task."""
    parser = argparse.ArgumentParser(
        prog="halfline-spectra",
        description="Eigenvalue enclosures for half-line Schroedinger operators.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="TOML document")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--format", nargs="+", choices=FORMATS, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--bc", default=None, help="dirichlet, neumann or sigma")

    commands = parser.add_subparsers(dest="command", required=True)

    bounds = commands.add_parser("bounds", parents=[common], help="enclosure regions")
    _add_bound_options(bounds)
    bounds.add_argument("--eigenvalues", type=Path, help="eigs JSON to overlay")
    bounds.set_defaults(func=cmd_bounds)

    eigs = commands.add_parser("eigs", parents=[common], help="eigenvalue search")
    eigs.add_argument(
        "--box", type=float, nargs=4, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX")
    )
    eigs.set_defaults(func=cmd_eigs)

    verify = commands.add_parser("verify", parents=[common], help="verification campaign")
    verify.set_defaults(func=cmd_verify)

    kernel = commands.add_parser("kernel-check", parents=[common], help="kernel row norms")
    kernel.add_argument("--samples", type=int, default=500)
    kernel.set_defaults(func=cmd_kernel_check)

    gfun = commands.add_parser("gfun", parents=[common], help="tabulate g")
    gfun.add_argument("--a-min", type=float, default=-10.0)
    gfun.add_argument("--a-max", type=float, default=10.0)
    gfun.add_argument("--points", type=int, default=201)
    gfun.add_argument("--sigma", type=float, default=None)
    gfun.add_argument("--mu-re", type=float, default=0.0)
    gfun.add_argument("--mu-im", type=float, default=1.0)
    gfun.set_defaults(func=cmd_gfun)

    sweep = commands.add_parser("sweep", parents=[common], help="exponent sweep")
    _add_bound_options(sweep)
    sweep.add_argument("--key", default="gamma", help="exponent name, or names joined by ','")
    sweep.add_argument("--grid", nargs="+", required=True)
    sweep.add_argument("--theta", type=float, default=math.pi)
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and map failures to exit codes.

    Returns
    -------
    code : int
        0 pass, 1 verification failure, 2 configuration error, 3 numerical error.
    """
    args = build_parser().parse_args(argv)
    if args.quiet:
        level = logging.ERROR
    else:
        level = max(logging.DEBUG, logging.WARNING - 10 * args.verbose)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return int(args.func(args))
    except NumericalError as exc:
        logger.error("Numerical error: %s", exc)  # noqa: TRY400
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        logger.error("Configuration error: %s", exc)  # noqa: TRY400
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
