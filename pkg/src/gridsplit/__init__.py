"""gridsplit: plan the proactive splitting of a meshed grid into islands.

The pipeline runs case -> intact power flow -> zone graph -> spectral
embedding -> connectivity-constrained Ward dendrogram -> islanding plans
screened island-by-island with AC power flow.
"""

from .clustering import (
    Dendrogram,
    Merge,
    Partition,
    constrained_ward_cluster,
    cut,
)
from .errors import GridsplitError, NumericalError, ValidationError
from .islanding import (
    EvaluateOptions,
    IslandReport,
    IslandingPlan,
    build_plan,
    evaluate,
    island_subcase,
    p_metric,
    redispatch_and_shed,
    sweep_metrics,
    sweep_to_csv,
)
from .network import (
    Branch,
    Bus,
    Generator,
    Load,
    NetworkCase,
    Shunt,
    apply_zone_map,
    case_from_dict,
    case_to_dict,
    load_zone_map,
    parse_case,
    save_case,
    tie_lines,
    validate_case,
)
from .powerflow import (
    PowerFlowOptions,
    PowerFlowSolution,
    branch_flows,
    power_balance,
    setpoint_flows,
    solve,
)
from .spectral import (
    SpectralReport,
    choose_k,
    eig_sym,
    embed,
    laplacians,
    spectral_report,
)
from .zonegraph import ZoneGraph, build_zone_graph, weighted_degree

__version__ = "0.1.0"

__all__ = [
    "Branch", "Bus", "Dendrogram", "EvaluateOptions", "Generator",
    "GridsplitError", "IslandReport", "IslandingPlan", "Load", "Merge",
    "NetworkCase", "NumericalError", "Partition", "PowerFlowOptions",
    "PowerFlowSolution", "Shunt", "SpectralReport", "ValidationError",
    "ZoneGraph", "apply_zone_map", "branch_flows", "build_plan",
    "build_zone_graph", "case_from_dict", "case_to_dict", "choose_k",
    "constrained_ward_cluster", "cut", "eig_sym", "embed", "evaluate",
    "island_subcase", "laplacians", "load_zone_map", "p_metric",
    "parse_case", "power_balance", "redispatch_and_shed", "save_case",
    "setpoint_flows", "solve", "spectral_report", "sweep_metrics",
    "sweep_to_csv", "tie_lines", "validate_case", "weighted_degree",
]
