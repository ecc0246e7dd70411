"""
Core library for cost-versus-benefit node immunisation fronts.
"""

from netimmune_core.lib.errors import (
    ConfigError,
    ConvergenceError,
    FrontSchemaError,
    GraphParseError,
    GraphValidationError,
    NetImmuneError,
    ValidationMismatchError,
)
from netimmune_core.lib.experiment import compare_fronts, run_experiment, validate_front
from netimmune_core.lib.generators import (
    generate_barabasi_albert,
    generate_barbell,
    generate_erdos_renyi,
    parse_generator_spec,
)
from netimmune_core.lib.graph import (
    EigenPair,
    Graph,
    degree_costs,
    eigen_drop,
    principal_eigenpair,
    remove_nodes,
)
from netimmune_core.lib.models import ExperimentConfig, GaConfig
from netimmune_core.lib.moea import (
    crowding_distance,
    evaluate,
    make_hybrid_init,
    nondominated_sort,
    nsga2_run,
    sms_emoa_run,
)
from netimmune_core.lib.pareto import (
    AttainmentCurve,
    Front,
    ObjectivePoint,
    dominates,
    first_attainment_curve,
    hv_contribution_2d,
    hypervolume_2d,
    nondominated_filter,
)
from netimmune_core.lib.parser import load_edge_list, load_source, write_edge_list
from netimmune_core.lib.qp import (
    QpInstance,
    QpSolution,
    budget_grid,
    build_qp,
    epsilon_sweep,
    epsilon_sweep_batched,
    solve_budget_qp,
)
from netimmune_core.lib.shield import netshield_greedy, netshield_plus, shield_value

__all__ = [
    # Graphs and spectra
    "Graph",
    "EigenPair",
    "principal_eigenpair",
    "remove_nodes",
    "eigen_drop",
    "degree_costs",

    # Ingestion and generators
    "load_edge_list",
    "load_source",
    "write_edge_list",
    "generate_erdos_renyi",
    "generate_barabasi_albert",
    "generate_barbell",
    "parse_generator_spec",

    # Shield-value methods
    "shield_value",
    "netshield_greedy",
    "netshield_plus",
    "QpInstance",
    "QpSolution",
    "build_qp",
    "budget_grid",
    "solve_budget_qp",
    "epsilon_sweep",
    "epsilon_sweep_batched",

    # Evolutionary search
    "GaConfig",
    "evaluate",
    "nsga2_run",
    "sms_emoa_run",
    "make_hybrid_init",
    "nondominated_sort",
    "crowding_distance",

    # Fronts and indicators
    "ObjectivePoint",
    "Front",
    "AttainmentCurve",
    "dominates",
    "nondominated_filter",
    "hypervolume_2d",
    "hv_contribution_2d",
    "first_attainment_curve",

    # Experiments
    "ExperimentConfig",
    "run_experiment",
    "compare_fronts",
    "validate_front",

    # Errors
    "NetImmuneError",
    "GraphParseError",
    "GraphValidationError",
    "ConvergenceError",
    "ConfigError",
    "FrontSchemaError",
    "ValidationMismatchError",
]
