"""Kruskal ranks, general position, and the certificates built on them."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

from .errors import (
    BadDimensionRequest,
    ContradictionDetected,
    IndexOutOfRange,
    PreconditionFailed,
    WrongModeCount,
)
from .linalg import Matrix, matrix_rank, rank_of_vectors
from .tensors import ProductVectorSet, span_dims, sum_set


def kruskal_rank(s: ProductVectorSet, j: int) -> int:
    """Largest ``k`` such that every ``k`` of the mode-``j`` factors are independent.

    Searches downward from ``min(n, dims[j])`` and stops at the first size
    where every subset passes; ``k = 1`` always passes.
    """
    if not 0 <= j < s.m:
        raise IndexOutOfRange(f"mode {j} outside 0..{s.m - 1}")
    vecs = s.mode_factors(j)
    F = s.field
    for k in range(min(s.n, s.signature.dims[j]), 1, -1):
        if all(rank_of_vectors(F, [vecs[a] for a in idx]) == k for idx in combinations(range(s.n), k)):
            return k
    return 1


def kruskal_ranks(s: ProductVectorSet) -> tuple[int, ...]:
    return tuple(kruskal_rank(s, j) for j in range(s.m))


@dataclass(frozen=True)
class GeneralPositionReport:
    requested: tuple[int, ...]
    holds: bool
    witness: tuple[int, frozenset[int]] | None = None

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            j, idx = self.witness
            w = {"mode": j + 1, "subset": sorted(a + 1 for a in idx)}
        return {"requested": list(self.requested), "holds": self.holds, "witness": w}


def check_general_position(s: ProductVectorSet, d: Sequence[int]) -> GeneralPositionReport:
    """Every ``d[j]`` of the mode-``j`` factors independent, for each ``j``.

    The witness, if any, is the first deficient ``(mode, subset)`` in mode
    order then lexicographic subset order.
    """
    d = tuple(int(x) for x in d)
    if len(d) != s.m:
        raise BadDimensionRequest(f"{len(d)} dimensions requested for {s.m} modes")
    for j, dj in enumerate(d):
        if dj < 1 or dj > s.n or dj > s.signature.dims[j]:
            raise BadDimensionRequest(f"d[{j}]={dj} outside 1..min(n={s.n}, dim={s.signature.dims[j]})",
                                      location={"mode": j})
    F = s.field
    for j, dj in enumerate(d):
        vecs = s.mode_factors(j)
        for idx in combinations(range(s.n), dj):
            if rank_of_vectors(F, [vecs[a] for a in idx]) < dj:
                return GeneralPositionReport(d, False, (j, frozenset(idx)))
    return GeneralPositionReport(d, True)


def kruskal_inequality(n: int, d: Iterable[int]) -> bool:
    return 2 * n - 1 <= sum(x - 1 for x in d)


@dataclass(frozen=True)
class UniquenessCertificate:
    n: int
    m: int
    kruskal_ranks: tuple[int, ...]
    inequality_lhs: int
    inequality_rhs: int
    certified: bool
    reason: str | None = None  # "TooFewVectors" | "TooFewModes" | "InequalityFails"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "kruskal_ranks": list(self.kruskal_ranks),
            "inequality_lhs": self.inequality_lhs,
            "inequality_rhs": self.inequality_rhs,
            "certified": self.certified,
            "reason": self.reason,
        }


def certify_uniqueness(s: ProductVectorSet) -> UniquenessCertificate:
    """Kruskal's sufficient condition for the sum of ``s`` to be a unique rank-n decomposition.

    A certified result claims: the sum has tensor rank ``n`` and every rank-n
    decomposition equals ``s`` up to order.  Fewer than three modes is a
    reason not to certify rather than an error.
    """
    ks = kruskal_ranks(s)
    lhs = 2 * s.n - 1
    rhs = sum(k - 1 for k in ks)
    reason = None
    if s.n < 2:
        reason = "TooFewVectors"
    elif s.m < 3:
        reason = "TooFewModes"
    elif lhs > rhs:
        reason = "InequalityFails"
    return UniquenessCertificate(s.n, s.m, ks, lhs, rhs, reason is None, reason)


@dataclass(frozen=True)
class GammaRankPrediction:
    """Outcome of the general-position rank classifier for one subset.

    ``applicable`` False means no claim.  Otherwise exactly one of
    ``predicted_rank`` (when the subset has the target size) and
    ``excluded_rank`` (the target, which the sum provably does not have) is set.
    """

    applicable: bool
    r: int
    gamma_size: int
    predicted_rank: int | None = None
    excluded_rank: int | None = None

    def consistent_with(self, rank: int) -> bool:
        if not self.applicable:
            return True
        if self.predicted_rank is not None:
            return rank == self.predicted_rank
        return rank != self.excluded_rank

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "r": self.r,
            "gamma_size": self.gamma_size,
            "predicted_rank": self.predicted_rank,
            "excluded_rank": self.excluded_rank,
        }


def classify_gamma_rank(s: ProductVectorSet, gamma: Iterable[int], r: int) -> GammaRankPrediction:
    """Predict whether ``sum_{a in gamma} x_a`` has tensor rank ``r``.

    Applies with ``d`` equal to the Kruskal ranks (the set is always in
    that general position) when ``n + r - 1 <= sum(k_j - 1)``; the sum then
    has rank ``r`` exactly when ``|gamma| == r``.
    """
    gamma = frozenset(gamma)
    if any(not 0 <= a < s.n for a in gamma):
        raise IndexOutOfRange(f"subset {sorted(gamma)} leaves 0..{s.n - 1}")
    if not 0 <= r <= s.n:
        raise PreconditionFailed(f"target rank {r} outside 0..{s.n}")
    ks = kruskal_ranks(s)
    if s.n < 2 or not check_general_position(s, ks).holds or s.n + r - 1 > sum(k - 1 for k in ks):
        return GammaRankPrediction(False, r, len(gamma))
    if len(gamma) == r:
        return GammaRankPrediction(True, r, len(gamma), predicted_rank=r)
    return GammaRankPrediction(True, r, len(gamma), excluded_rank=r)


@dataclass(frozen=True)
class BipartiteVerdict:
    status: str  # "nonzero" | "premise_failed"
    n: int
    d: tuple[int, int]
    product_rank: int | None = None  # rank of X_1 X_2^T

    def to_json(self) -> dict:
        return {"status": self.status, "n": self.n, "d": list(self.d), "product_rank": self.product_rank}


def bipartite_nonzero_check(s: ProductVectorSet, d: Sequence[int] | None = None) -> BipartiteVerdict:
    """Two-mode sums with ``n + 1 <= d_1 + d_2`` never vanish.

    Checked two ways: the factor matrices ``X_1 X_2^T`` must have rank at
    least ``d_1 + d_2 - n`` (Sylvester), and the summed tensor must be nonzero.
    """
    if s.m != 2:
        raise WrongModeCount(f"need 2 modes, got {s.m}")
    spans = span_dims(s)
    d = tuple(spans) if d is None else tuple(int(x) for x in d)
    if len(d) != 2 or any(x < 1 for x in d):
        raise BadDimensionRequest(f"bad dimension pair {d}")
    if any(want > have for want, have in zip(d, spans)):
        raise PreconditionFailed(f"span dimensions {spans} fall short of {d}")
    if s.n + 1 > d[0] + d[1]:
        return BipartiteVerdict("premise_failed", s.n, d)
    F = s.field
    x1 = Matrix.from_columns(s.mode_factors(0), F)
    x2 = Matrix.from_columns(s.mode_factors(1), F)
    rank = matrix_rank(x1 @ x2.T)
    if rank < d[0] + d[1] - s.n or sum_set(s).is_zero():
        raise ContradictionDetected(f"two-mode sum vanished with n={s.n}, d={d}")
    return BipartiteVerdict("nonzero", s.n, d, rank)
