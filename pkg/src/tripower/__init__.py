"""Power-law random graphs: samplers, triangle statistics, limit constants."""

from .degree_sequences import (
    DegreeSequence,
    TailReport,
    fix_parity,
    generate_quantile,
    is_graphical,
    sample_iid,
    verify_tail_bound,
)
from .graph_core import (
    ClusteringCurve,
    Graph,
    clustering_curve,
    count_triangles,
    count_triangles_bruteforce,
    degree_sequence_of,
    from_edge_list,
    two_paths_from,
)
from .samplers import (
    Multigraph,
    SwitchChainState,
    configuration_model,
    default_burn_in,
    erase,
    erased_configuration_model,
    generalized_random_graph,
    havel_hakimi_realization,
    uniform_sample_mcmc,
)
from .exact_oracle import (
    GraphEnsemble,
    enumerate_graphs,
    exact_edge_probability,
    exact_expected_triangles,
    sampler_tv_distance,
)
from .theory import (
    CkPrediction,
    ModelParams,
    classify_ck_range,
    constant_A,
    edge_probability_asymptotic,
    f_scale,
    gamma_comparison,
    integral_ck_range3,
    integral_triangle_ecm,
    integral_triangle_uniform,
    limit_triangle_constant,
    predict_ck,
    predict_triangles,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    contribution_diagnostics,
    run_ck_sweep,
    run_triangle_sweep,
    stable_hash,
    write_outputs,
)

__version__ = "0.1.0"
