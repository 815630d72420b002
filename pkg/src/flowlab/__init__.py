"""Exact-arithmetic minimum-cost flow laboratory.

Three classic solvers (minimum-mean cycle canceling, network simplex,
successive shortest paths) over exact rational arithmetic, together with
generators for adversarial smoothed instances whose iteration counts are
known in closed form.
"""

from .core import (
    CapacityViolation,
    CostInterval,
    Cycle,
    Edge,
    EmptyCycleError,
    Flow,
    FlowLabError,
    FlowNetwork,
    InfeasibleError,
    IterationCapExceeded,
    ResidualEdge,
    ResidualNetwork,
    SmoothedInstance,
    UnboundedCycleError,
    Violation,
    ZeroResidualCapacityError,
    augment_cycle,
    check_feasible,
    flow_cost,
    rational,
    residual,
    validate_instance,
    validate_network,
    verify_optimality,
)
from .cli import ExperimentSpec, run_experiment
from .formats import (
    ParseError,
    read_dimacs,
    read_smoothed,
    write_dimacs,
    write_smoothed,
)
from .generators import (
    MmccGeneralParams,
    NsParams,
    ParamViolation,
    gen_mmcc_general,
    gen_mmcc_large_phi,
    gen_ns_lower_bound,
    gen_random_smoothed,
    predicted_mmcc_general_iterations,
    predicted_mmcc_large_phi_iterations,
    predicted_ns_pivots,
    sample_costs,
    strip_q_chain,
)
from .maxflow import solve_max_flow
from .mincycle import brute_force_min_mean, karp_min_mean
from .mmcc import (
    MmccTrace,
    default_iteration_cap,
    halving_violation,
    initial_feasible_flow,
    mmcc_solve,
)
from .netsimplex import (
    InfeasibleStructureError,
    NsTrace,
    SpanningTreeStructure,
    basic_structure_from_flow,
    compute_potentials,
    nondegenerate_cycle_paths,
    ns_solve,
    pivot,
    tree_flow,
    validate_structure,
)
from .ssp import (
    NegativeCycleError,
    SspTrace,
    concentrate_budgets,
    distances_to_sink,
    ssp_solve,
    zero_budget_copy,
)

__all__ = [
    "CapacityViolation",
    "CostInterval",
    "Cycle",
    "Edge",
    "EmptyCycleError",
    "ExperimentSpec",
    "Flow",
    "FlowLabError",
    "FlowNetwork",
    "InfeasibleError",
    "InfeasibleStructureError",
    "IterationCapExceeded",
    "MmccGeneralParams",
    "MmccTrace",
    "NegativeCycleError",
    "NsParams",
    "NsTrace",
    "ParamViolation",
    "ParseError",
    "ResidualEdge",
    "ResidualNetwork",
    "SmoothedInstance",
    "SpanningTreeStructure",
    "SspTrace",
    "UnboundedCycleError",
    "Violation",
    "ZeroResidualCapacityError",
    "augment_cycle",
    "basic_structure_from_flow",
    "brute_force_min_mean",
    "check_feasible",
    "compute_potentials",
    "concentrate_budgets",
    "default_iteration_cap",
    "distances_to_sink",
    "flow_cost",
    "gen_mmcc_general",
    "gen_mmcc_large_phi",
    "gen_ns_lower_bound",
    "gen_random_smoothed",
    "halving_violation",
    "initial_feasible_flow",
    "karp_min_mean",
    "mmcc_solve",
    "nondegenerate_cycle_paths",
    "ns_solve",
    "pivot",
    "predicted_mmcc_general_iterations",
    "predicted_mmcc_large_phi_iterations",
    "predicted_ns_pivots",
    "rational",
    "read_dimacs",
    "read_smoothed",
    "residual",
    "run_experiment",
    "sample_costs",
    "solve_max_flow",
    "ssp_solve",
    "strip_q_chain",
    "tree_flow",
    "validate_instance",
    "validate_network",
    "validate_structure",
    "verify_optimality",
    "write_dimacs",
    "write_smoothed",
    "zero_budget_copy",
]

__version__ = "0.1.0"
