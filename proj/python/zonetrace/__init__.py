"""Loop-flow decomposition of DC power flows and bidding-zone splitting."""

from ._core import (
    FlowSolution,
    InputError,
    Network,
    NoLoopFlowsError,
    NumericalError,
    Scenario,
    ZonetraceError,
    __version__,
    classify,
    decompose,
    exchange_matrices,
    incidence,
    load_network,
    load_scenarios,
    parse_network,
    rank_zones,
    run_pipeline,
    select_target_zone,
    solve_dc,
    split_zone,
    trace,
)

__all__ = [
    "FlowSolution",
    "InputError",
    "Network",
    "NoLoopFlowsError",
    "NumericalError",
    "Scenario",
    "ZonetraceError",
    "__version__",
    "classify",
    "decompose",
    "exchange_matrices",
    "incidence",
    "load_network",
    "load_scenarios",
    "parse_network",
    "rank_zones",
    "run_pipeline",
    "select_target_zone",
    "solve_dc",
    "split_zone",
    "trace",
]
