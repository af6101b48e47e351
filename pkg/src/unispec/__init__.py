"""Spectra, walk counts, universal covers, and non-backtracking-walk statistics
of finite graphs and sampled random trees, plus numerical evaluation of the
associated average-degree lower bounds."""

from .graph import (
    BudgetError,
    DegreeStats,
    DirectedEdge,
    Graph,
    GraphInputError,
    PeeledCore,
    bfs_distances,
    build_graph,
    core_peel,
    degree_stats,
    generate,
    induced_subgraph,
    load_graph,
    parse_edge_list,
)
from .spectra import (
    EigenReport,
    SpectralMeasure,
    adjacency_spectrum,
    eigenvalues_csv,
    markov_spectrum,
    moment,
    sigma,
    tail_mass,
)
from .walks import (
    DyckPath,
    TreeWalkCode,
    WalkCountTable,
    WeightFn,
    catalan,
    closed_walk_counts,
    decode_tree_walk,
    edge_weight,
    encode_tree_walk,
    enumerate_dyck,
    profile_stack_states,
    srw_return_probs,
    walk_identity_check,
    weighted_closed_walks,
)
from .cover import (
    CoverBall,
    LiftCheck,
    cover_walk_counts,
    rho_cover_estimate,
    universal_cover_ball,
    verify_lifting,
)
from .nbw import (
    BUILTIN_TRANSPORTS,
    EdgeRootedLaw,
    NBWKernel,
    NBWSimulation,
    NBWTrajectory,
    StationarityReport,
    degree_biased_edge_law,
    degree_transport,
    distance_window_transport,
    edge_root_law,
    mtp_check,
    nbw_entropy,
    nbw_transition,
    simulate_nbw,
    stationarity_check,
)
from .ensembles import (
    Census,
    DegreeDistribution,
    Estimate,
    RootedTree,
    ball_census,
    canonical_rooted_code,
    estimate_sphere,
    estimate_walk_moment,
    exact_sphere_expectation,
    regular_tree_walks,
    sample_ugw,
    tv_distance,
)
from .bounds import (
    AlonBoppanaRow,
    BoundReport,
    alon_boppana_report,
    hoory_bound,
    sphere_growth_bounds,
    srw_tail_threshold,
    tail_mass_constant,
    tail_mass_lower_bound,
    tree_spectral_radius_bounds,
    tree_srw_radius_bounds,
)

__version__ = "0.1.0"
