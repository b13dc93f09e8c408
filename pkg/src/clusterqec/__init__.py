"""Hypergraph-product quantum LDPC codes: construction, analytic
threshold bounds, cluster decoding, and Monte Carlo threshold sweeps."""

from .gf2 import (
    BinaryMatrix,
    BinaryVector,
    PauliVector,
    in_rowspace,
    kernel_basis,
    kronecker,
    rank,
    solve_consistent,
    trace_inner_product,
)
from .codes import (
    BudgetExceededError,
    ClassicalCode,
    CommutativityError,
    CssCode,
    circulant,
    classical_code,
    css_code,
    distance_exhaustive,
    distance_upper_bound,
    hypergraph_product,
    load_code,
    predicted_parameters,
    random_regular_ldpc,
    save_code,
)
from .clusters import (
    ClusterGraph,
    bethe_perimeter,
    build_connectivity_graph,
    build_spacetime_graph,
    decompose,
    exact_cluster_distribution,
    sample_cluster_histogram,
)
from .bounds import (
    BoundsReport,
    GvSolution,
    alpha_z,
    bounds_report,
    depolarizing_bound,
    gv_distance,
    min_blocklength,
    percolation_threshold,
    rate_bound,
    spacetime_bound,
    violating_set_tail,
)
from .decoder import (
    ClusterBudget,
    DecodeOutcome,
    ErrorSample,
    adjudicate,
    decode_depolarizing,
    decode_erasure,
    decode_oracle_min_weight,
    default_cluster_budget,
    syndrome,
)
from .montecarlo import (
    SweepConfig,
    SweepResult,
    run_sweep,
    sample_depolarizing,
    sample_erasure,
    threshold_estimate,
    wilson_interval,
)

__version__ = "0.1.0"
