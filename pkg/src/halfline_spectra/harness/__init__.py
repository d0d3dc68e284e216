"""Harness module."""

from .campaign import (
    Campaign,
    CampaignOutcome,
    Panel,
    SweepRow,
    VerificationRecord,
    bound_selector,
    check_admissible,
    exponent_sweep,
    run_campaign,
    run_campaign_detailed,
    with_printed_variants,
)
from .config import (
    BoundSpec,
    CampaignConfig,
    OutputSettings,
    PotentialSettings,
    SolverSettings,
    expand_bounds,
    load_config,
    parse_config,
)
from .report import read_records_csv, render_panel, render_report, summarize

__all__ = [
    "BoundSpec",
    "Campaign",
    "CampaignConfig",
    "CampaignOutcome",
    "OutputSettings",
    "Panel",
    "PotentialSettings",
    "SolverSettings",
    "SweepRow",
    "VerificationRecord",
    "bound_selector",
    "check_admissible",
    "expand_bounds",
    "exponent_sweep",
    "load_config",
    "parse_config",
    "read_records_csv",
    "render_panel",
    "render_report",
    "run_campaign",
    "run_campaign_detailed",
    "summarize",
    "with_printed_variants",
]
