"""edgewise: bounded-independence edge subsampling and oracle-model basis finding."""

from .basisfind import (
    BasisReport,
    CircuitList,
    ClaimViolation,
    Constants,
    PreconditionError,
    detect_single_circuit,
    find_basis,
    find_large_independent_set_cographic,
    find_large_independent_set_graphic,
    list_short_cycles,
    list_small_cuts,
)
from .experiments import (
    ExperimentReport,
    ExperimentSpec,
    conditional_bias_check,
    connectivity_experiment,
    cyclefree_experiment,
    gen_graph,
    graph_summary,
    independence_strength_sweep,
    instance_label,
    load_graph,
    reweight_then_connectivity,
    sparsify_experiment,
    union_bound_component_floor,
    unique_cut_survival_experiment,
    unique_cycle_survival_experiment,
)
from .graph import Graph, MinCut
from .matroid import COGRAPHIC, GRAPHIC, OracleSession, QueryLedger, ind_cographic, ind_graphic
from .reweight import (
    ClusterPartition,
    ConverseReport,
    WeightingResult,
    cluster_low_rdiam,
    reweight_min_cut,
    verify_converse,
)
from .samplespace import (
    DEFAULT_ENUM_BUDGET,
    IndependenceReport,
    SampleSpace,
    SpaceParams,
    SupportTooLargeError,
    build_almost_kwise,
    build_kwise,
    enumerate_support,
    space_from_descriptor,
    verify_independence,
    with_marginal,
)
from .spectral import (
    ApproxReport,
    FormChecker,
    ResistanceTable,
    SparsifyPlan,
    edge_form_checker,
    effective_resistance,
    leverage_scores,
    resistance_diameter,
    spectral_approx_check,
    sparsify_rates,
)

__all__ = [
    "COGRAPHIC",
    "GRAPHIC",
    "ApproxReport",
    "BasisReport",
    "CircuitList",
    "ClaimViolation",
    "Constants",
    "DEFAULT_ENUM_BUDGET",
    "ExperimentReport",
    "ExperimentSpec",
    "FormChecker",
    "Graph",
    "IndependenceReport",
    "MinCut",
    "OracleSession",
    "PreconditionError",
    "QueryLedger",
    "ResistanceTable",
    "SampleSpace",
    "SpaceParams",
    "SparsifyPlan",
    "WeightingResult",
    "SupportTooLargeError",
    "ClusterPartition",
    "ConverseReport",
    "build_almost_kwise",
    "build_kwise",
    "cluster_low_rdiam",
    "conditional_bias_check",
    "connectivity_experiment",
    "cyclefree_experiment",
    "detect_single_circuit",
    "edge_form_checker",
    "effective_resistance",
    "enumerate_support",
    "find_basis",
    "find_large_independent_set_cographic",
    "find_large_independent_set_graphic",
    "gen_graph",
    "graph_summary",
    "independence_strength_sweep",
    "ind_cographic",
    "ind_graphic",
    "instance_label",
    "leverage_scores",
    "list_short_cycles",
    "list_small_cuts",
    "load_graph",
    "resistance_diameter",
    "reweight_min_cut",
    "reweight_then_connectivity",
    "space_from_descriptor",
    "verify_converse",
    "sparsify_experiment",
    "sparsify_rates",
    "spectral_approx_check",
    "union_bound_component_floor",
    "unique_cut_survival_experiment",
    "unique_cycle_survival_experiment",
    "verify_independence",
    "with_marginal",
]
