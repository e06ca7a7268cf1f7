"""Brute-force ground truth over small prime fields.

Everything here enumerates: product vectors of a signature, multisets of
them, lines of a plane.  Costs are bounded by a ``budget`` (maximum number
of candidates or multiset prefixes examined) so a mistaken call fails fast
with :class:`BudgetExceeded` instead of running for hours.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import lru_cache
from itertools import product
from math import comb, prod

from . import _backend
from .errors import (
    BudgetExceeded,
    ContradictionDetected,
    NotIndependent,
    PreconditionFailed,
    RankExceedsBound,
    RationalsNotEnumerable,
    RationalsRequireProductSpan,
    WrongRank,
)
from .linalg import FieldSpec, matrix_rank, rank_of_vectors
from .tensors import (
    DenseTensor,
    ModeSignature,
    ProductVector,
    ProductVectorSet,
    expansion_matrix,
    factor_product,
    flattening_ranks,
    is_product_tensor,
    linear_combination,
    span_dims,
)

DEFAULT_BUDGET = 2_000_000


def product_vector_count(sig: ModeSignature) -> int:
    p = sig.field.p
    return prod(p ** d - 1 for d in sig.dims) // (p - 1) ** (sig.m - 1)


def _nonzero_vectors(p: int, d: int, monic: bool) -> Iterator[tuple[int, ...]]:
    for v in product(range(p), repeat=d):
        lead = next((x for x in v if x), 0)
        if lead and (not monic or lead == 1):
            yield v


def enumerate_product_vectors(sig: ModeSignature, budget: int = DEFAULT_BUDGET) -> Iterator[ProductVector]:
    """Every product tensor of the signature exactly once, canonical and sorted.

    Factor 0 ranges over all nonzero vectors and the remaining factors over
    vectors with leading entry 1, each in lexicographic order.
    """
    F = sig.field
    if not F.is_finite:
        raise RationalsNotEnumerable("product vectors over Q cannot be enumerated")
    raw = prod(F.p ** d - 1 for d in sig.dims)
    if raw > budget:
        raise BudgetExceeded(f"{raw} factor combinations exceed the budget {budget}")
    pools = [list(_nonzero_vectors(F.p, d, monic=j > 0)) for j, d in enumerate(sig.dims)]
    for factors in product(*pools):
        yield ProductVector(sig, factors)


class Catalog:
    """All product vectors of a signature with their flattened expansions."""

    def __init__(self, sig: ModeSignature, budget: int = DEFAULT_BUDGET):
        self.signature = sig
        self.vectors: list[ProductVector] = list(enumerate_product_vectors(sig, budget))
        self.flat: list[int] = [v for x in self.vectors for v in x.entries]
        self.index: dict[tuple, int] = {x.entries: i for i, x in enumerate(self.vectors)}

    def __len__(self):
        return len(self.vectors)

    def find(self, target: Sequence, r: int, firsts=None, max_hits: int = -1) -> list[tuple[int, ...]]:
        sig = self.signature
        return _backend.kernels().find_multisets(
            self.flat, len(self), sig.size, tuple(target), r, sig.field.p, firsts, max_hits)


@lru_cache(maxsize=32)
def _catalog(sig: ModeSignature) -> Catalog:
    return Catalog(sig, budget=10 ** 9)


def catalog(sig: ModeSignature, budget: int = DEFAULT_BUDGET) -> Catalog:
    F = sig.field
    if not F.is_finite:
        raise RationalsNotEnumerable("product vectors over Q cannot be enumerated")
    raw = prod(F.p ** d - 1 for d in sig.dims)
    if raw > budget:
        raise BudgetExceeded(f"{raw} factor combinations exceed the budget {budget}")
    return _catalog(sig)


def _prefix_count(k: int, r: int) -> int:
    """Number of (r-1)-multisets of k candidates scanned for a rank-r probe."""
    return comb(k + r - 2, r - 1) if r >= 2 else 1


# -- tensor rank ---------------------------------------------------------------

@dataclass(frozen=True)
class RankResult:
    rank: int
    witness: tuple[ProductVector, ...] | None
    method: str  # "flattening_bound_met" | "exhaustive"
    lower_bound: int = 0

    def to_json(self) -> dict:
        from .io import product_vector_to_json
        return {
            "rank": self.rank,
            "method": self.method,
            "flattening_bound": self.lower_bound,
            "witness": None if self.witness is None else [product_vector_to_json(x) for x in self.witness],
        }


def generic_rank_bound(sig: ModeSignature) -> int:
    """Any tensor has rank at most the product of all dimensions but the largest."""
    return prod(sorted(sig.dims)[:-1]) if sig.m > 1 else 1


def tensor_rank(t: DenseTensor, max_r: int | None = None, budget: int = DEFAULT_BUDGET) -> RankResult:
    """Exact tensor rank by increasing ``r``.

    Flattening ranks give the starting lower bound; each ``r`` then scans all
    r-multisets of product vectors (as a prefix scan plus a lookup of the
    last term).  Rank 0 and 1 are decided by flattenings alone, so they work
    over Q as well.
    """
    sig = t.signature
    lower = max(flattening_ranks(t))
    if lower == 0:
        return RankResult(0, (), "flattening_bound_met", 0)
    if lower == 1:
        return RankResult(1, (factor_product(t),), "flattening_bound_met", 1)
    if not sig.field.is_finite:
        raise RationalsNotEnumerable(f"rank over Q is only known to be >= {lower}")
    if max_r is None:
        max_r = generic_rank_bound(sig)
    cat = catalog(sig, budget)
    for r in range(lower, max_r + 1):
        if _prefix_count(len(cat), r) > budget:
            raise BudgetExceeded(f"rank {r} probe needs {_prefix_count(len(cat), r)} prefixes")
        hits = cat.find(t.entries, r, max_hits=1)
        if hits:
            method = "flattening_bound_met" if r == lower else "exhaustive"
            return RankResult(r, tuple(cat.vectors[i] for i in hits[0]), method, lower)
    raise RankExceedsBound(f"rank exceeds {max_r}", lower_bound=max(lower, max_r + 1))


def rank_at_most(t: DenseTensor, r: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``rank(t) <= r``; cheaper than computing the rank when it is large."""
    if r < 0:
        return False
    if max(flattening_ranks(t)) > r:
        return False
    try:
        tensor_rank(t, max_r=r, budget=budget)
    except RankExceedsBound:
        return False
    return True


@dataclass(frozen=True)
class UniquenessResult:
    unique: bool
    count: int
    decompositions: tuple[tuple[ProductVector, ...], ...]

    def to_json(self) -> dict:
        from .io import product_vector_to_json
        return {
            "unique": self.unique,
            "count": self.count,
            "decompositions": [[product_vector_to_json(x) for x in d] for d in self.decompositions],
        }


def unique_decomposition_check(t: DenseTensor, r: int, budget: int = DEFAULT_BUDGET,
                               keep: int = 8) -> UniquenessResult:
    """Enumerate every r-multiset of product vectors summing to ``t``.

    Canonical factor scaling absorbs rescalings and multisets absorb
    permutations, so "unique" means exactly one hit.  At most ``keep``
    decompositions are kept in the result; ``count`` is the full total.
    """
    try:
        found = tensor_rank(t, max_r=r, budget=budget)
    except RankExceedsBound:
        raise WrongRank(f"tensor has rank above {r}") from None
    if found.rank != r:
        raise WrongRank(f"tensor has rank {found.rank}, not {r}")
    if r <= 1:
        return UniquenessResult(True, 1, (found.witness,))
    cat = catalog(t.signature, budget)
    if _prefix_count(len(cat), r) > budget:
        raise BudgetExceeded(f"rank {r} enumeration needs {_prefix_count(len(cat), r)} prefixes")
    hits = cat.find(t.entries, r)
    decomps = tuple(tuple(cat.vectors[i] for i in h) for h in hits[:keep])
    return UniquenessResult(len(hits) == 1, len(hits), decomps)


# -- pairs and product-ness ------------------------------------------------------

def nonparallel_modes(x1: ProductVector, x2: ProductVector) -> list[int]:
    """Modes where the two factors span a plane."""
    F = x1.field
    return [j for j, (u, v) in enumerate(zip(x1.factors, x2.factors)) if rank_of_vectors(F, [u, v]) == 2]


@dataclass(frozen=True)
class PairSum:
    kind: str  # "product" | "entangled" | "zero"
    nonparallel: tuple[int, ...]
    result: ProductVector | None = None

    def to_json(self) -> dict:
        from .io import product_vector_to_json
        return {
            "kind": self.kind,
            "nonparallel_modes": [j + 1 for j in self.nonparallel],
            "product": None if self.result is None else product_vector_to_json(self.result),
        }


def _ratio(field: FieldSpec, u: Sequence, v: Sequence):
    """``c`` with ``v == c * u`` for parallel nonzero vectors."""
    k = next(i for i, x in enumerate(u) if x)
    return field.div(v[k], u[k])


def is_product_sum_pair(x1: ProductVector, x2: ProductVector, a1=1, a2=1) -> PairSum:
    """Classify ``a1*x1 + a2*x2`` using only the factor geometry.

    With at most one non-parallel mode ``j`` the sum factors explicitly:
    ``(a1*x1_j + a2*beta*x2_j)`` in mode ``j`` times the shared remaining
    factors of ``x1``, where ``x2`` without mode ``j`` is ``beta`` times
    ``x1`` without mode ``j``.
    """
    F = x1.field
    if x1.signature != x2.signature:
        raise PreconditionFailed("product vectors must share a signature")
    a1, a2 = F(a1), F(a2)
    modes = tuple(nonparallel_modes(x1, x2))
    if len(modes) >= 2:
        if a1 and a2:
            return PairSum("entangled", modes)
        if not a1 and not a2:
            return PairSum("zero", modes)
        single = x1.scaled(a1) if a1 else x2.scaled(a2)
        return PairSum("product", modes, single)
    j = modes[0] if modes else 0
    beta = F.one
    for k in range(x1.m):
        if k != j:
            beta = F.mul(beta, _ratio(F, x1.factors[k], x2.factors[k]))
    combined = tuple(F.add(F.mul(a1, u), F.mul(F.mul(a2, beta), v))
                     for u, v in zip(x1.factors[j], x2.factors[j]))
    if not any(combined):
        return PairSum("zero", modes)
    factors = list(x1.factors)
    factors[j] = combined
    return PairSum("product", modes, ProductVector(x1.signature, tuple(factors)))


@dataclass(frozen=True)
class NonparallelVerdict:
    count: int
    bound: int

    def to_json(self) -> dict:
        return {"nonparallel_modes": self.count, "bound": self.bound, "holds": self.count <= self.bound}


def nonparallel_mode_bound_check(s: ProductVectorSet, coeffs: Sequence) -> NonparallelVerdict:
    """Linearly independent vectors with a product combination are non-parallel in < n modes."""
    F = s.field
    coeffs = [F(c) for c in coeffs]
    if len(coeffs) != s.n or not all(coeffs):
        raise PreconditionFailed("need one nonzero coefficient per vector")
    if matrix_rank(expansion_matrix(s)) != s.n:
        raise PreconditionFailed("the vectors are linearly dependent")
    if not is_product_tensor(linear_combination(s, coeffs)):
        raise PreconditionFailed("the combination is not a product vector")
    count = sum(1 for d in span_dims(s) if d > 1)
    if count > s.n - 1:
        raise ContradictionDetected(f"{count} non-parallel modes for {s.n} vectors")
    return NonparallelVerdict(count, s.n - 1)


# -- planes --------------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceCategory:
    category: int
    product_lines: tuple[DenseTensor, ...] = dc_field(default=())

    def to_json(self) -> dict:
        F = self.product_lines[0].field if self.product_lines else None
        return {
            "category": self.category,
            "product_lines": [[F.format_scalar(v) for v in t.entries] for t in self.product_lines],
        }


_CATEGORY_BY_COUNT = {2: 2, 1: 3, 0: 4}


def classify_2d_subspace(v1: DenseTensor, v2: DenseTensor) -> SubspaceCategory:
    """Which of the four plane types ``span{v1, v2}`` is.

    Over F_p all ``p + 1`` lines are tested.  Category 1 lists every line;
    the others list exactly their product lines.  Over Q the plane must be
    spanned by two product vectors and the pair criterion decides between
    categories 1 and 2 (listing the two spanning vectors).
    """
    v1._check(v2)
    F = v1.field
    if rank_of_vectors(F, [v1.entries, v2.entries]) < 2:
        raise NotIndependent("the two tensors are parallel or zero")
    if not F.is_finite:
        if not (is_product_tensor(v1) and is_product_tensor(v2)):
            raise RationalsRequireProductSpan("over Q only planes spanned by two product vectors are supported")
        pair = is_product_sum_pair(factor_product(v1), factor_product(v2))
        return SubspaceCategory(1 if len(pair.nonparallel) <= 1 else 2, (v1, v2))
    lines = [v1] + [v1.scaled(c) + v2 for c in F.elements()]
    products = tuple(t for t in lines if is_product_tensor(t))
    if len(products) == len(lines):
        return SubspaceCategory(1, products)
    if len(products) not in _CATEGORY_BY_COUNT:
        raise ContradictionDetected(f"{len(products)} product lines out of {len(lines)}")
    return SubspaceCategory(_CATEGORY_BY_COUNT[len(products)], products)


def max_flattening_rank(t: DenseTensor) -> int:
    return max(flattening_ranks(t))

