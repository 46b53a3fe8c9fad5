"""Base exchange graphs of graphic matroids and quadric certificates for their toric ideals."""

from .errors import ContractError, InvariantError, ParseError, PathError
from .exchange import (
    ExchangeGraph,
    apply_double_swap,
    build_k_base_graph,
    build_multiset_fiber_graph,
    build_single_exchange_graph,
    double_swap_candidates,
    fiber_multisets,
    is_k_tuple,
    k_tuples,
    ordered_pairs,
)
from .graph import MultiGraph, format_graph, parse_graph, unsubdivide
from .ideal import (
    BaseBinomial,
    QuadricCertificate,
    decompose_step,
    decompose_to_quadrics,
    in_ideal,
    theta,
    verify_certificate,
)
from .matroid import enumerate_bases, is_base, lift_tuple, parallel_extension, rank
from .pathfinder import (
    KPath,
    PairPath,
    balance,
    equalize_matchings,
    find_path_k,
    find_path_single,
    matching_graph,
    verify_k_path,
    verify_pair_path,
)

__version__ = "0.1.0"
