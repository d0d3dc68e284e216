"""Module for verification campaigns: enclosures against computed eigenvalues."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any

import numpy as np

from halfline_spectra.eigensolver.contour import Rectangle, find_eigenvalues
from halfline_spectra.enclosure.bounds import estimate_constant
from halfline_spectra.enclosure.exponents import ExponentConfig, conjugate_exponent
from halfline_spectra.enclosure.region import (
    RAY_TOLERANCE,
    BoundSelector,
    EnclosureRegion,
    Provenance,
    enclosure_region,
    theta_grid,
)
from halfline_spectra.exceptions import (
    ExponentError,
    InadmissibleExponentsError,
    NumericalError,
)
from halfline_spectra.potential.catalog import build_family
from halfline_spectra.potential.factorization import factorize, scheme_from_name
from halfline_spectra.potential.norms import lebesgue_norm, weak_norm, weighted_norm
from halfline_spectra.resolvent.resolvent import BoundaryCondition, spectral_point

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from halfline_spectra.eigensolver.shooting import Eigenvalue
    from halfline_spectra.harness.config import (
        BoundSpec,
        CampaignConfig,
        OutputSettings,
        SolverSettings,
    )
    from halfline_spectra.potential.potential import Potential

logger = logging.getLogger(__name__)

PASS_RTOL = 1e-9
SEARCH_FACTOR = 10.0
MIN_SEARCH_HALF_WIDTH = 1.0
DIRICHLET_ONLY = {Provenance.THM2, Provenance.REM3}
PROVENANCE_ORDER = {p: k for k, p in enumerate(Provenance)}
UNCOUNTED_FLAGS = frozenset({"unscaled", "printed"})


def _jsonable(value: Any) -> Any:  # noqa: ANN401
    """Plain JSON types; complex numbers become [re, im]."""
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


@dataclass(frozen=True)
class VerificationRecord:
    """Outcome of checking one eigenvalue against one enclosure.

    ``passed`` is ``margin >= -1e-9 (1 + radius)``. Records whose bound or
    solve failed carry the reason in ``skipped`` and no eigenvalue.
    """

    potential_index: int
    potential_params: dict[str, Any]
    provenance: str
    bound_parameters: dict[str, Any]
    lam: complex | None = None
    residual: float | None = None
    method: str | None = None
    radius: float | None = None
    margin: float | None = None
    passed: bool = False
    flags: tuple[str, ...] = ()
    skipped: str = ""

    @property
    def is_skipped(self) -> bool:
        """Whether the record holds no verification."""
        return bool(self.skipped)

    @property
    def counts(self) -> bool:
        """Whether the record enters the pass/fail verdict."""
        return not self.is_skipped and not UNCOUNTED_FLAGS.intersection(self.flags)


@dataclass(frozen=True)
class Campaign:
    """Potential family, estimates and solver settings of one verification run.

    ``radius_scale`` multiplies every radius before the containment check;
    values below 1 deliberately weaken the estimates to test the harness.
    """

    family: list[tuple[dict[str, Any], Potential]]
    bounds: tuple[BoundSpec, ...]
    bc: BoundaryCondition
    solver: SolverSettings
    output: OutputSettings
    radius_scale: float = 1.0

    @classmethod
    def from_config(cls, config: CampaignConfig) -> Campaign:
        """Build the family and boundary condition described by a document."""
        family = build_family(config.potential.table, config.potential.base_dir)
        bc = BoundaryCondition.parse(config.solver.bc)
        return cls(family, config.bounds, bc, config.solver, config.output)


@dataclass
class Panel:
    """Regions and eigenvalues of one potential, used for plots."""

    index: int
    params: dict[str, Any]
    regions: list[tuple[str, EnclosureRegion]] = field(default_factory=list)
    eigenvalues: list[complex] = field(default_factory=list)


@dataclass
class CampaignOutcome:
    """Records in deterministic order with the per-potential panels."""

    records: list[VerificationRecord]
    panels: list[Panel]
    constants: dict[str, float] = field(default_factory=dict)


def _sigma(spec: BoundSpec, bc: BoundaryCondition) -> float:
    return bc.sigma if spec.sigma is None else spec.sigma


def _selector_params(
    q: Potential, spec: BoundSpec, bc: BoundaryCondition
) -> dict[str, Any]:
    """Norms and exponents of an estimate for one potential."""
    provenance = Provenance(spec.provenance)
    p = spec.p
    if provenance in {Provenance.THM2, Provenance.THM4, Provenance.THM4_PRINTED}:
        p_other = p if provenance is Provenance.THM4_PRINTED else conjugate_exponent(p)
        f = factorize(q, scheme_from_name(spec.scheme, spec.tau), p, p_other)
        norms = tuple(n.value for n in f.norms())
        if provenance is Provenance.THM2:
            return {"norms": norms}
        return {"norms": norms, "sigma": _sigma(spec, bc)}
    if provenance in {
        Provenance.THM1,
        Provenance.THM3,
        Provenance.THM3_NEG,
        Provenance.THM5_WEAK,
    }:
        r = _required(spec, "r")
        s = r if spec.s is None else spec.s
        cfg = ExponentConfig(p, r, s)
        f = factorize(q, scheme_from_name(spec.scheme, spec.tau), r, s)
        if provenance is Provenance.THM5_WEAK:
            weak = (weak_norm(f.a, r).value, weak_norm(f.b, s).value)
            return {"weak_norms": weak, "cfg": cfg, "constant": spec.constant}
        return {"norms": tuple(n.value for n in f.norms()), "cfg": cfg}
    if provenance is Provenance.COR1:
        r = _required(spec, "r")
        f = factorize(q, scheme_from_name("sqrt"), r, r)
        return {"norms": tuple(n.value for n in f.norms()), "r": r, "p": p}
    if provenance in {Provenance.COR2, Provenance.REM1, Provenance.COR5}:
        gamma = _required(spec, "gamma")
        if provenance is Provenance.COR5:
            weak_sup = weak_norm(q, gamma + 0.5).value ** (gamma + 0.5)
            return {"weak_sup": weak_sup, "gamma": gamma, "constant": spec.constant, "p": p}
        integral = lebesgue_norm(q, gamma + 0.5).value ** (gamma + 0.5)
        if provenance is Provenance.REM1:
            return {"integral": integral, "gamma": gamma}
        return {"integral": integral, "gamma": gamma, "p": p}
    tau = _required(spec, "tau")
    if provenance is Provenance.REM3:
        return {"weighted_norm": weighted_norm(q, p, tau).value, "p": p, "tau": tau}
    r = _required(spec, "r")
    if provenance is Provenance.COR3:
        integral = weighted_norm(q, r, tau, "power").value ** r
        return {"weighted_integral": integral, "r": r, "tau": tau, "p": p}
    integral = weighted_norm(q, r, tau, "exponential").value ** r
    return {"exp_integral": integral, "r": r, "tau": tau, "p": p}


def _required(spec: BoundSpec, key: str) -> float:
    value = getattr(spec, key)
    if value is None:
        msg = f"{spec.provenance} needs the exponent '{key}'."
        raise InadmissibleExponentsError(msg)
    return float(value)


def bound_selector(
    q: Potential, spec: BoundSpec, bc: BoundaryCondition | None = None
) -> BoundSelector:
    """Compute the norms an estimate needs and wrap them in a selector.

    Raises
    ------
    InadmissibleExponentsError
        If the exponents fail the gate or the estimate does not apply to ``bc``.
    NormDivergesError
        If a required norm is infinite.
    """
    bc = bc or BoundaryCondition.dirichlet()
    provenance = Provenance(spec.provenance)
    if provenance in DIRICHLET_ONLY and not bc.is_dirichlet:
        msg = f"{provenance.value} holds for the Dirichlet condition only, got {bc.label}."
        raise InadmissibleExponentsError(msg)
    return BoundSelector(provenance, _selector_params(q, spec, bc))


def check_admissible(spec: BoundSpec, bc: BoundaryCondition | None = None) -> None:
    """Run the admissibility gate of an estimate without any potential.

    The radius of unit norms at theta = pi goes through the same gates as a
    real evaluation, so any inadmissible exponent raises here.
    """
    bc = bc or BoundaryCondition.dirichlet()
    provenance = Provenance(spec.provenance)
    if provenance in DIRICHLET_ONLY and not bc.is_dirichlet:
        msg = f"{provenance.value} holds for the Dirichlet condition only, got {bc.label}."
        raise InadmissibleExponentsError(msg)
    unit: dict[Provenance, Any] = {
        Provenance.THM1: lambda: {"norms": (1.0, 1.0), "cfg": _cfg(spec)},
        Provenance.THM3: lambda: {"norms": (1.0, 1.0), "cfg": _cfg(spec)},
        Provenance.THM3_NEG: lambda: {"norms": (1.0, 1.0), "cfg": _cfg(spec)},
        Provenance.THM5_WEAK: lambda: {"weak_norms": (1.0, 1.0), "cfg": _cfg(spec)},
        Provenance.THM2: lambda: {"norms": (1.0, 1.0)},
        Provenance.THM4: lambda: {"norms": (1.0, 1.0), "sigma": _sigma(spec, bc)},
        Provenance.THM4_PRINTED: lambda: {"norms": (1.0, 1.0), "sigma": _sigma(spec, bc)},
        Provenance.COR1: lambda: {"norms": (1.0, 1.0), "r": _required(spec, "r"), "p": spec.p},
        Provenance.COR2: lambda: {
            "integral": 1.0, "gamma": _required(spec, "gamma"), "p": spec.p
        },
        Provenance.REM1: lambda: {"integral": 1.0, "gamma": _required(spec, "gamma")},
        Provenance.COR5: lambda: {
            "weak_sup": 1.0, "gamma": _required(spec, "gamma"), "p": spec.p
        },
        Provenance.COR3: lambda: {
            "weighted_integral": 1.0,
            "r": _required(spec, "r"),
            "tau": _required(spec, "tau"),
            "p": spec.p,
        },
        Provenance.COR4: lambda: {
            "exp_integral": 1.0,
            "r": _required(spec, "r"),
            "tau": _required(spec, "tau"),
            "p": spec.p,
        },
        Provenance.REM3: lambda: {
            "weighted_norm": 1.0, "p": spec.p, "tau": _required(spec, "tau")
        },
    }
    BoundSelector(provenance, unit[provenance]()).radius(math.pi)


def _cfg(spec: BoundSpec) -> ExponentConfig:
    r = _required(spec, "r")
    return ExponentConfig(spec.p, r, r if spec.s is None else spec.s)


def _search_box(solver: SolverSettings, regions: Sequence[EnclosureRegion]) -> Rectangle:
    if solver.search_box is not None:
        return Rectangle(*solver.search_box)
    largest = max((region.max_radius for region in regions), default=0.0)
    half = min(max(SEARCH_FACTOR * largest, MIN_SEARCH_HALF_WIDTH), solver.search_cap)
    return Rectangle(-half, half, -half, half)


def _applies(region: EnclosureRegion, lam: complex) -> bool:
    """Ray-only estimates speak about negative eigenvalues only."""
    if region.ray_radius is None:
        return True
    return abs(spectral_point(lam).theta - math.pi) <= RAY_TOLERANCE


def _unit_radius(
    region: EnclosureRegion, selector: BoundSelector
) -> tuple[EnclosureRegion, float] | None:
    """Region at C = 1 with the power C enters with, for weak-norm estimates."""
    if "unscaled" not in region.flags:
        return None
    if region.provenance is Provenance.COR5:
        return region, float(selector.params["gamma"])
    cfg = selector.params["cfg"]
    return region, 1 + float(cfg.alpha)


def _verify_potential(  # noqa: C901, PLR0913
    index: int,
    params: dict[str, Any],
    q: Potential,
    campaign: Campaign,
    thetas: np.ndarray,
) -> tuple[list[VerificationRecord], Panel, dict[str, float]]:
    params = _jsonable(params)
    panel = Panel(index, params)
    records: list[VerificationRecord] = []
    constants: dict[str, float] = {}
    built: list[tuple[BoundSpec, BoundSelector, EnclosureRegion]] = []
    for spec in campaign.bounds:
        try:
            selector = bound_selector(q, spec, campaign.bc)
            region = enclosure_region(selector, thetas)
        except NumericalError as exc:
            logger.warning("Potential %d, %s skipped: %s", index, spec.label, exc)
            records.append(
                VerificationRecord(
                    index,
                    params,
                    spec.provenance,
                    _jsonable(spec.exponents()),
                    skipped=f"{type(exc).__name__}: {exc}",
                )
            )
            continue
        built.append((spec, selector, region))
        panel.regions.append((spec.label, region))

    solver = campaign.solver
    try:
        search = find_eigenvalues(
            q,
            _search_box(solver, [region for _, _, region in built]),
            campaign.bc,
            solver.max_count,
            truncation_length=solver.truncation_length,
            margin=solver.margin,
            tolerance=solver.tolerance,
        )
    except NumericalError as exc:
        logger.warning("Potential %d: eigenvalue search failed: %s", index, exc)
        records.extend(
            VerificationRecord(
                index,
                params,
                spec.provenance,
                _jsonable(spec.exponents()),
                skipped=f"{type(exc).__name__}: {exc}",
            )
            for spec, _, _ in built
        )
        return records, panel, constants
    if search.truncated:
        logger.warning("Potential %d: more than %d eigenvalues", index, solver.max_count)
    logger.info("Potential %d %s: %d eigenvalues", index, params, len(search))

    eigenvalues: list[Eigenvalue] = list(search)
    panel.eigenvalues = [e.lam for e in eigenvalues]
    checks = []
    for eig in eigenvalues:
        for spec, _, region in built:
            if not _applies(region, eig.lam):
                continue
            radius = region.radius_at(spectral_point(eig.lam).theta)
            radius *= campaign.radius_scale
            gap = radius - abs(eig.lam)
            checks.append(
                VerificationRecord(
                    index,
                    params,
                    spec.provenance,
                    _jsonable(spec.exponents()),
                    eig.lam,
                    eig.residual,
                    eig.method.value,
                    radius,
                    gap,
                    bool(gap >= -PASS_RTOL * (1 + radius)),
                    region.flags,
                )
            )
        for spec, selector, region in built:
            unit = _unit_radius(region, selector)
            if unit is not None:
                unit_region, power = unit
                key = spec.label
                needed = estimate_constant([eig.lam], unit_region.radius_at, power)
                constants[key] = max(constants.get(key, 0.0), needed)
    checks.sort(
        key=lambda r: (
            abs(r.lam),  # type: ignore[arg-type]
            PROVENANCE_ORDER[Provenance(r.provenance)],
        )
    )
    return records + checks, panel, constants


def with_printed_variants(specs: Sequence[BoundSpec]) -> tuple[BoundSpec, ...]:
    """Follow every ``Thm4`` entry by its ``Thm4Printed`` twin.

    The twin uses the norm pair (||a||_p, ||b||_p) instead of the Hoelder pair
    and is flagged ``printed``: reported, kept out of the verdict.
    Entries already listed are not duplicated.
    """
    expanded = list(specs)
    for spec in specs:
        if Provenance(spec.provenance) is not Provenance.THM4:
            continue
        twin = replace(spec, provenance=Provenance.THM4_PRINTED.value)
        if twin not in expanded:
            expanded.insert(expanded.index(spec) + 1, twin)
    return tuple(expanded)


def run_campaign_detailed(campaign: Campaign, jobs: int = 1) -> CampaignOutcome:
    """Run a campaign and keep the regions for plotting.

    See ``run_campaign`` for the record semantics.
    """
    campaign = replace(campaign, bounds=with_printed_variants(campaign.bounds))
    for spec in campaign.bounds:
        check_admissible(spec, campaign.bc)
    thetas = theta_grid(campaign.output.theta_points, campaign.output.exclusion)
    items = list(enumerate(campaign.family))

    def work(item: tuple[int, tuple[dict[str, Any], Potential]]) -> Any:  # noqa: ANN401
        index, (params, q) = item
        logger.info("Potential %d of %d", index + 1, len(items))
        return _verify_potential(index, params, q, campaign, thetas)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(item) for item in items]

    outcome = CampaignOutcome([], [])
    for records, panel, constants in results:
        outcome.records.extend(records)
        outcome.panels.append(panel)
        for key, value in constants.items():
            outcome.constants[key] = max(outcome.constants.get(key, 0.0), value)
    return outcome


def run_campaign(campaign: Campaign, jobs: int = 1) -> list[VerificationRecord]:
    """Check every computed eigenvalue against every configured enclosure.

    Parameters
    ----------
    campaign : Campaign
        Family, estimates and settings.
    jobs : int, default = 1
        Potentials processed concurrently; the output order does not depend
        on it.

    Returns
    -------
    records : list of VerificationRecord
        Ordered by potential, then |lam|, then provenance. Skipped records of
        a potential come first.

    Raises
    ------
    InadmissibleExponentsError
        If any estimate fails its gate; raised before any solve runs.
    """
    return run_campaign_detailed(campaign, jobs).records


@dataclass(frozen=True)
class SweepRow:
    """Radius of one grid entry of an exponent sweep."""

    exponents: dict[str, float]
    radius: float | None
    admissible: bool
    reason: str = ""
    minimal: bool = False


def exponent_sweep(
    q: Potential,
    spec: BoundSpec,
    grid: Sequence[Mapping[str, float]],
    theta_ref: float,
    bc: BoundaryCondition | None = None,
) -> list[SweepRow]:
    """Radius at one angle over a grid of exponents.

    Parameters
    ----------
    q : Potential
        Potential.
    spec : BoundSpec
        Template estimate; each grid entry overrides some of its exponents,
        e.g. ``{"gamma": 1.5}`` or ``{"r": 3.0, "s": 6.0}``.
    grid : sequence of mappings
        Exponent overrides.
    theta_ref : float
        Angle in (0, 2 pi).
    bc : BoundaryCondition, optional
        Dirichlet when omitted.

    Returns
    -------
    table : list of SweepRow
        One row per grid entry in order; inadmissible entries carry the reason
        and the smallest admissible radius is flagged ``minimal``.
    """
    rows = []
    for entry in grid:
        overrides = {k: float(v) for k, v in entry.items()}
        candidate = replace(spec, **overrides)
        try:
            selector = bound_selector(q, candidate, bc)
            radius = selector.radius(theta_ref)
        except (InadmissibleExponentsError, ExponentError) as exc:
            rows.append(SweepRow(overrides, None, admissible=False, reason=str(exc)))
            continue
        except NumericalError as exc:
            rows.append(SweepRow(overrides, None, admissible=True, reason=str(exc)))
            continue
        rows.append(SweepRow(overrides, radius, admissible=True))
    finite = [k for k, row in enumerate(rows) if row.radius is not None]
    if finite:
        best = min(finite, key=lambda k: rows[k].radius)  # type: ignore[arg-type,return-value]
        rows[best] = replace(rows[best], minimal=True)
    return rows
