"""Exact tools for sums of product vectors: zero sums, tensor rank and uniqueness.

Arithmetic is exact over Q or F_p (p in 2, 3, 5, 7).  Hot loops run in a
compiled extension when it is built and fall back to pure Python otherwise;
see :mod:`kruskallab._backend`.
"""

from .conjecture import (
    SearchSpace,
    Verdict,
    reduction_pairing,
    search_counterexamples,
    tight_example,
    verify_conjecture_instance,
    verify_rank_version,
    verify_two_dim_case,
)
from .errors import ContradictionDetected, FalsificationEvent, KruskalLabError
from .kruskal import (
    certify_uniqueness,
    check_general_position,
    kruskal_rank,
    kruskal_ranks,
)
from .linalg import GF, QQ, FieldSpec, Matrix, matrix_rank
from .ranklab import tensor_rank, unique_decomposition_check
from .tensors import (
    DenseTensor,
    ModeSignature,
    ProductVector,
    ProductVectorSet,
    span_dims,
    sum_set,
)
from .zerosum import build_chain, minimal_zero_partition, zero_sum_subsets

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "ContradictionDetected",
    "DenseTensor",
    "FalsificationEvent",
    "FieldSpec",
    "KruskalLabError",
    "Matrix",
    "ModeSignature",
    "ProductVector",
    "ProductVectorSet",
    "SearchSpace",
    "Verdict",
    "build_chain",
    "certify_uniqueness",
    "check_general_position",
    "kruskal_rank",
    "kruskal_ranks",
    "matrix_rank",
    "minimal_zero_partition",
    "reduction_pairing",
    "search_counterexamples",
    "span_dims",
    "sum_set",
    "tensor_rank",
    "tight_example",
    "unique_decomposition_check",
    "verify_conjecture_instance",
    "verify_rank_version",
    "verify_two_dim_case",
    "zero_sum_subsets",
]
