"""Instance verifiers, the tight family, the pairing reduction, and exhaustive search.

A verifier never raises for a well-formed instance whose premises fail or
whose conclusion fails: it returns a :class:`Verdict` whose status is
``holds``, ``not_applicable`` or ``COUNTEREXAMPLE``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations, product
from math import comb

from .errors import BudgetExceeded, PreconditionFailed, SumsDiffer
from .io import field_to_json, instance_to_json
from .linalg import QQ, FieldSpec
from .ranklab import DEFAULT_BUDGET, catalog, rank_at_most, tensor_rank
from .tensors import ModeSignature, ProductVector, ProductVectorSet, span_dims, sum_set
from .zerosum import (
    Partition,
    is_irreducible,
    mask_to_set,
    minimal_zero_partition,
    zero_sum_masks,
)

HOLDS = "holds"
NOT_APPLICABLE = "not_applicable"
COUNTEREXAMPLE = "COUNTEREXAMPLE"

TARGETS = ("conj13", "thm32", "thm41", "conj52")


@dataclass(frozen=True)
class Verdict:
    status: str
    target: str
    n: int
    m: int
    premises: dict = dc_field(default_factory=dict)
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "target": self.target,
            "n": self.n,
            "m": self.m,
            "premises": dict(self.premises),
            "witness": self.witness,
        }


def _one_based(indices) -> list[int]:
    return sorted(a + 1 for a in indices)


def verify_conjecture_instance(s: ProductVectorSet) -> Verdict:
    """Zero total plus ``n - 1 <= sum(d_j - 1)`` should force a zero-sum proper subset.

    ``d_j`` is taken as the span dimension of mode ``j``, the largest value
    the hypothesis allows, so this one check covers every smaller choice.
    """
    d = span_dims(s)
    lhs, rhs = s.n - 1, sum(x - 1 for x in d)
    premises = {
        "n_at_least_2": s.n >= 2,
        "total_sum_zero": sum_set(s).is_zero(),
        "dimension_inequality": lhs <= rhs,
    }
    if not all(premises.values()):
        return Verdict(NOT_APPLICABLE, "conj13", s.n, s.m, premises)
    full = (1 << s.n) - 1
    proper = next((mk for mk in zero_sum_masks(s) if mk != full), None)
    if proper is not None:
        return Verdict(HOLDS, "conj13", s.n, s.m, premises, {"gamma": _one_based(mask_to_set(proper))})
    return Verdict(COUNTEREXAMPLE, "conj13", s.n, s.m, premises, {
        "span_dims": list(d), "lhs": lhs, "rhs": rhs, "zero_sum_proper_subsets": [],
        "instance": instance_to_json(s),
    })


def verify_two_dim_case(s: ProductVectorSet) -> Verdict:
    """Irreducible zero sums with every span at least 2 need ``n >= m + 2``."""
    spans = span_dims(s)
    premises = {"spans_at_least_2": all(x >= 2 for x in spans), "total_sum_zero": sum_set(s).is_zero()}
    premises["irreducible"] = is_irreducible(s) if premises["total_sum_zero"] else False
    if not all(premises.values()):
        return Verdict(NOT_APPLICABLE, "thm32", s.n, s.m, premises)
    if s.n >= s.m + 2:
        return Verdict(HOLDS, "thm32", s.n, s.m, premises, {"n": s.n, "m_plus_2": s.m + 2})
    return Verdict(COUNTEREXAMPLE, "thm32", s.n, s.m, premises,
                   {"span_dims": list(spans), "n": s.n, "m_plus_2": s.m + 2, "instance": instance_to_json(s)})


RANK_MODES = {"kr_thm41": "thm41", "conj52": "conj52"}


def verify_rank_version(s: ProductVectorSet, r: int, mode: str = "kr_thm41",
                        budget: int = DEFAULT_BUDGET) -> Verdict:
    """Rank-``r`` analogue of the two-dimensional case and its conjectured generalization.

    Condition 2 is checked with the rank oracle: the total has rank exactly
    ``r`` and every subset of size ``r+1 .. n-1`` has rank above ``r``.  The
    conclusion is ``n + r >= m + 2`` (``kr_thm41``) or
    ``n + r - 2 >= sum(d_j - 1)`` with ``d_j`` the span dimensions (``conj52``).
    Premises are evaluated cheapest first; ones never reached are ``None``.
    """
    if mode not in RANK_MODES:
        raise ValueError(f"mode must be one of {sorted(RANK_MODES)}")
    target = RANK_MODES[mode]
    spans = span_dims(s)
    premises: dict = {"r_in_range": 0 <= r <= s.n - 2}
    if mode == "kr_thm41":
        premises["spans_at_least_2"] = all(x >= 2 for x in spans)
    else:
        premises["m_at_least_2"] = s.m >= 2
    premises["total_rank_is_r"] = None
    premises["subsets_rank_above_r"] = None

    def done(status, witness=None):
        return Verdict(status, target, s.n, s.m, premises, witness)

    if not all(v for v in premises.values() if v is not None):
        return done(NOT_APPLICABLE)
    total = sum_set(s)
    premises["total_rank_is_r"] = rank_at_most(total, r, budget) and not rank_at_most(total, r - 1, budget)
    if not premises["total_rank_is_r"]:
        return done(NOT_APPLICABLE)
    ok = True
    for size in range(r + 1, s.n):
        for gamma in combinations(range(s.n), size):
            if rank_at_most(sum_set(s, gamma), r, budget):
                ok = False
                break
        if not ok:
            break
    premises["subsets_rank_above_r"] = ok
    if not ok:
        return done(NOT_APPLICABLE)
    if mode == "kr_thm41":
        lhs, rhs = s.n + r, s.m + 2
    else:
        lhs, rhs = s.n + r - 2, sum(x - 1 for x in spans)
    if lhs >= rhs:
        return done(HOLDS, {"r": r, "lhs": lhs, "rhs": rhs})
    return done(COUNTEREXAMPLE, {"r": r, "lhs": lhs, "rhs": rhs, "span_dims": list(spans),
                                 "instance": instance_to_json(s)})


def tight_example(n: int, field: FieldSpec = QQ) -> ProductVectorSet:
    """``n`` vectors in ``n - 2`` modes of dimension 2, irreducible with zero sum.

    Starts from ``e0, e1, -e0-e1`` and, to grow by one, puts ``e0`` in front
    of all but the last vector and replaces the last vector ``x`` with
    ``-e1 ⊗ x`` and ``(e0 + e1) ⊗ x``.
    """
    if n < 3:
        raise PreconditionFailed("the tight family starts at n = 3")
    e0, e1, e01 = (1, 0), (0, 1), (1, 1)
    vectors = [[e0], [e1], [(-1, -1)]]
    for _ in range(3, n):
        *head, last = vectors
        vectors = [[e0] + x for x in head] + [[(0, -1)] + last, [e01] + last]
    return ProductVectorSet.from_factors(vectors, field)


@dataclass(frozen=True)
class PairingResult:
    pairing: tuple[int, ...] | None  # sigma with xs[a] == ys[sigma[a]]
    partition: Partition
    n: int

    @property
    def paired(self) -> bool:
        return self.pairing is not None

    def to_json(self) -> dict:
        return {
            "paired": self.paired,
            "pairing": None if self.pairing is None else [b + 1 for b in self.pairing],
            "partition": self.partition.to_json(),
            "block_sizes": self.partition.sizes(),
        }


def reduction_pairing(xs: ProductVectorSet, ys: ProductVectorSet) -> PairingResult:
    """Match two decompositions of the same tensor term by term, if possible.

    Indices ``0..n-1`` of the partition are the ``xs``, ``n..2n-1`` the
    negated ``ys``.  When every minimal zero block is an ``(x, -y)`` pair the
    matching is returned; otherwise the partition is the obstruction.
    """
    if xs.signature != ys.signature or xs.n != ys.n:
        raise PreconditionFailed("both sets need the same signature and size")
    if sum_set(xs) != sum_set(ys):
        raise SumsDiffer("the two sets have different sums")
    n = xs.n
    combined = ProductVectorSet(xs.signature, xs.vectors + tuple(-y for y in ys))
    part = minimal_zero_partition(combined)
    sigma = [None] * n
    for block in part.blocks:
        lo, hi = min(block), max(block)
        if len(block) != 2 or not lo < n <= hi:
            return PairingResult(None, part, n)
        sigma[lo] = hi - n
    return PairingResult(tuple(sigma), part, n)


# -- exhaustive search ------------------------------------------------------------

@dataclass(frozen=True)
class SearchSpace:
    """Multisets of ``n`` product vectors over ``dims[:m]`` for the given ranges.

    ``relabel`` additionally requires the smallest vector of each multiset to
    be the least of its orbit under coordinate permutations in every mode.
    """

    field: FieldSpec
    dims: tuple[int, ...]
    n_range: tuple[int, int]
    m_range: tuple[int, int] | None = None
    relabel: bool = False

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "n_range", tuple(self.n_range))
        if self.m_range is None:
            object.__setattr__(self, "m_range", (len(self.dims), len(self.dims)))
        object.__setattr__(self, "m_range", tuple(self.m_range))
        if not self.field.is_finite:
            raise PreconditionFailed("search spaces need a prime field")
        lo, hi = self.m_range
        if lo < 1 or hi > len(self.dims):
            raise PreconditionFailed(f"m range {self.m_range} needs dims for modes 1..{hi}")
        if self.n_range[0] < 1:
            raise PreconditionFailed("n must be at least 1")

    def signatures(self) -> list[ModeSignature]:
        lo, hi = self.m_range
        return [ModeSignature(self.dims[:m], self.field) for m in range(lo, hi + 1)]

    def ns(self) -> range:
        return range(self.n_range[0], self.n_range[1] + 1)

    def to_json(self) -> dict:
        return {
            "field": field_to_json(self.field),
            "dims": list(self.dims),
            "n_range": list(self.n_range),
            "m_range": list(self.m_range),
            "relabel": self.relabel,
        }


@dataclass
class SearchReport:
    target: str
    space: SearchSpace
    scanned: int = 0
    holds: int = 0
    not_applicable: int = 0
    counterexamples: list = dc_field(default_factory=list)
    holds_examples: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "space": self.space.to_json(),
            "scanned": self.scanned,
            "holds": self.holds,
            "not_applicable": self.not_applicable,
            "counterexamples": list(self.counterexamples),
            "holds_examples": list(self.holds_examples),
        }


@lru_cache(maxsize=32)
def orbit_minimal(sig: ModeSignature) -> tuple[int, ...]:
    """Catalog indices that are least in their orbit under per-mode coordinate permutations."""
    cat = catalog(sig, budget=10 ** 9)
    perms = list(product(*(list(permutations(range(d))) for d in sig.dims)))
    keep = []
    for i, x in enumerate(cat.vectors):
        best = i
        for per_mode in perms:
            factors = tuple(tuple(f[k] for k in pi) for f, pi in zip(x.factors, per_mode))
            best = min(best, cat.index[ProductVector(sig, factors).entries])
        if best == i:
            keep.append(i)
    return tuple(keep)


def _multisets_from(count: int, first: int, n: int) -> int:
    return comb(count - first + n - 2, n - 1)


def _verify(target: str, s: ProductVectorSet, budget: int) -> Verdict:
    if target == "conj13":
        return verify_conjecture_instance(s)
    if target == "thm32":
        return verify_two_dim_case(s)
    mode = "kr_thm41" if target == "thm41" else "conj52"
    if mode == "kr_thm41" and any(x < 2 for x in span_dims(s)):
        return verify_rank_version(s, 0, mode, budget)  # fails on spans before any rank work
    if s.n < 2:
        return verify_rank_version(s, 0, mode, budget)
    r = tensor_rank(sum_set(s), budget=budget).rank
    return verify_rank_version(s, r, mode, budget)


def _run_shard(job) -> tuple[int, int, list, list]:
    """Scan all multisets of size ``n`` whose smallest catalog index is ``first``."""
    p, dims, n, first, target, budget, keep = job
    sig = ModeSignature(dims, FieldSpec.prime(p))
    cat = catalog(sig, budget=10 ** 9)
    holds, na = 0, 0
    cex, examples = [], []
    if target in ("conj13", "thm32"):
        # both verifiers are not_applicable unless the total vanishes
        candidates = cat.find((0,) * sig.size, n, firsts=[first])
        na += _multisets_from(len(cat), first, n) - len(candidates)
    else:
        candidates = ((first,) + rest for rest in combinations_with_replacement(range(first, len(cat)), n - 1))
    for idx in candidates:
        s = ProductVectorSet(sig, tuple(cat.vectors[i] for i in idx))
        v = _verify(target, s, budget)
        if v.status == HOLDS:
            holds += 1
            if len(examples) < keep:
                examples.append(dict(instance_to_json(s), verdict=v.to_json()))
        elif v.status == NOT_APPLICABLE:
            na += 1
        else:
            cex.append(dict(instance_to_json(s), verdict=v.to_json()))
    return holds, na, cex, examples


def search_counterexamples(space: SearchSpace, target: str, workers: int = 1,
                           budget: int = DEFAULT_BUDGET, keep_holds: int = 3) -> SearchReport:
    """Run the ``target`` verifier over every multiset in ``space``.

    Work is sharded by (m, n, smallest index) and merged in that order, so
    the report is identical for any worker count.
    """
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    report = SearchReport(target, space)
    jobs = []
    for sig in space.signatures():
        cat = catalog(sig, budget)
        firsts = orbit_minimal(sig) if space.relabel else range(len(cat))
        for n in space.ns():
            for f in firsts:
                report.scanned += _multisets_from(len(cat), f, n)
                jobs.append((sig.field.p, sig.dims, n, f, target, budget, keep_holds))
    if report.scanned > budget:
        raise BudgetExceeded(f"{report.scanned} multisets exceed the budget {budget}")
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_shard, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_shard(job) for job in jobs]
    for holds, na, cex, examples in results:
        report.holds += holds
        report.not_applicable += na
        report.counterexamples.extend(cex)
        room = keep_holds - len(report.holds_examples)
        report.holds_examples.extend(examples[:max(room, 0)])
    return report
