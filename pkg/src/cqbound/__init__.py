"""Uniform continuity bounds for conditional entropy of classical-quantum
states: evaluators, certifiers, saturating pairs, an entanglement-of-formation
estimator and a counterexample search for two open variants."""

from .bounds import (
    BoundReport,
    as_bound,
    certify_countable,
    certify_prop1,
    eof_bound,
    eof_delta,
    saturating_pair,
)
from .channels import (
    ConditionalDephasingChannel,
    apply_conditional_dephasing,
    apply_projection_channel,
    build_conditional_dephasing,
    check_unital,
    extract_joint,
)
from .entropy import (
    binary_entropy,
    conditional_entropy_bipartite,
    conditional_entropy_cq,
    mutual_information,
    relative_entropy,
    shannon_conditional,
    von_neumann,
)
from .eof import PureDecomposition, certify_eof_corollary, eof_estimate, eof_pure
from .explorer import SearchConfig, fq_gap, qc_gap, search
from .matcore import hermitian_eig, partial_trace, tensor_product
from .states import (
    CQState,
    embed_cq,
    extract_cq,
    make_density,
    pair_at_distance,
    sample_cq,
    sample_density,
    total_variation,
    trace_distance,
)

__version__ = "0.1.0"
