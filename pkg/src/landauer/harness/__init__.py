"""Config-driven scenario harness: runs, reports, tables, figures."""

from .config import (
    SCENARIO_DEFAULTS,
    ScenarioConfig,
    build_reservoir,
    build_state,
    default_config,
    load_config,
    parse_config,
)
from .report import CheckResult, ReportWriter, RunReport
from .reservoirs import (
    detuned_couplings,
    detuned_fields,
    min_gap,
    single_spin_reservoir,
    spin_chain_reservoir,
)
from .scenarios import list_scenarios, run_scenario

__all__ = [
    "SCENARIO_DEFAULTS",
    "ScenarioConfig",
    "build_reservoir",
    "build_state",
    "default_config",
    "load_config",
    "parse_config",
    "CheckResult",
    "ReportWriter",
    "RunReport",
    "detuned_couplings",
    "detuned_fields",
    "min_gap",
    "single_spin_reservoir",
    "spin_chain_reservoir",
    "list_scenarios",
    "run_scenario",
]
