"""Zero-sum subsets, minimal zero partitions and the chain-cover construction.

Index sets are ``frozenset`` of 0-based indices.  "Subset order" means
ascending by size, then lexicographic on the sorted indices.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm

from . import _backend
from .errors import (
    ConditionsViolated,
    ContradictionDetected,
    NonzeroTotalSum,
    NotAPartition,
    Stalled,
    TooManyVectors,
)
from .tensors import ProductVectorSet, sum_set

MAX_VECTORS = 24


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def set_to_mask(indices: Iterable[int]) -> int:
    return reduce(lambda acc, i: acc | 1 << i, indices, 0)


def subset_key(indices: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    ordered = tuple(sorted(indices))
    return len(ordered), ordered


def _mask_key(mask: int):
    return subset_key(mask_to_set(mask))


def _kernel_input(s: ProductVectorSet) -> tuple[list[int], int]:
    """Flattened expansions as ints plus the kernel modulus."""
    F = s.field
    if F.is_finite:
        return [v for x in s for v in x.entries], F.p
    values = [Fraction(v) for x in s for v in x.entries]
    den = reduce(lcm, (v.denominator for v in values), 1)
    return [int(v * den) for v in values], 0


def zero_sum_masks(s: ProductVectorSet) -> list[int]:
    """Bitmasks of all nonempty zero-sum subsets, in subset order."""
    if s.n > MAX_VECTORS:
        raise TooManyVectors(f"{s.n} vectors; exhaustive subset search stops at {MAX_VECTORS}")
    flat, p = _kernel_input(s)
    masks = _backend.for_modulus(p).zero_sum_masks(flat, s.n, s.signature.size, p)
    return sorted(masks, key=_mask_key)


def zero_sum_subsets(s: ProductVectorSet) -> list[frozenset[int]]:
    return [mask_to_set(m) for m in zero_sum_masks(s)]


@dataclass(frozen=True)
class Partition:
    ground: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        check_partition(self.ground, blocks)

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def to_json(self) -> list[list[int]]:
        return [sorted(i + 1 for i in b) for b in self.blocks]


def check_partition(n: int, blocks: Sequence[frozenset[int]], label: str = "blocks") -> None:
    seen: set[int] = set()
    for k, b in enumerate(blocks):
        if not b:
            raise NotAPartition(f"{label}[{k}] is empty", location={label: k})
        if not all(0 <= i < n for i in b):
            raise NotAPartition(f"{label}[{k}] leaves the ground set [0, {n})", location={label: k})
        if seen & b:
            raise NotAPartition(f"{label}[{k}] overlaps an earlier block", location={label: k})
        seen |= b
    if len(seen) != n:
        raise NotAPartition(f"{label} miss indices {sorted(set(range(n)) - seen)}")


def _require_zero_total(s: ProductVectorSet) -> None:
    if not sum_set(s).is_zero():
        raise NonzeroTotalSum("the vectors do not sum to zero")


def minimal_zero_partition(s: ProductVectorSet) -> Partition:
    """Split ``[n]`` into zero-sum blocks none of which has a zero-sum proper part.

    Blocks are taken greedily: the first zero-sum subset (in subset order)
    of the indices not yet used.  The first such subset is automatically
    minimal, since any zero-sum proper part would come earlier.
    """
    _require_zero_total(s)
    full = (1 << s.n) - 1
    masks = zero_sum_masks(s)
    used = 0
    blocks = []
    while used != full:
        block = next(m for m in masks if not m & used)
        blocks.append(mask_to_set(block))
        used |= block
    return Partition(s.n, tuple(blocks))


def is_irreducible(s: ProductVectorSet) -> bool:
    """True when the (zero) total has no zero-sum nonempty proper subset.

    Checks both the plain form and the half-size form (subsets of size at
    most n // 2, which suffices by complementation) and insists they agree.
    """
    _require_zero_total(s)
    full = (1 << s.n) - 1
    proper = [m for m in zero_sum_masks(s) if m != full]
    plain = not proper
    half = not any(m.bit_count() <= s.n // 2 for m in proper)
    if plain != half:
        raise ContradictionDetected("complementation failed for the irreducibility test")
    return plain


# -- chain covers -------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    origin: str  # "S" or "T"
    position: int
    members: frozenset[int]

    def to_json(self) -> dict:
        return {"origin": self.origin, "block": sorted(i + 1 for i in self.members)}


@dataclass(frozen=True)
class ChainProblem:
    """Two families of blocks over ``[n]`` (each meant to partition it)."""

    ground: int
    s_blocks: tuple[frozenset[int], ...]
    t_blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "s_blocks", tuple(frozenset(b) for b in self.s_blocks))
        object.__setattr__(self, "t_blocks", tuple(frozenset(b) for b in self.t_blocks))

    def blocks(self) -> list[Block]:
        return ([Block("S", k, b) for k, b in enumerate(self.s_blocks)]
                + [Block("T", k, b) for k, b in enumerate(self.t_blocks)])

    def to_json(self) -> dict:
        return {
            "n": self.ground,
            "S": [sorted(i + 1 for i in b) for b in self.s_blocks],
            "T": [sorted(i + 1 for i in b) for b in self.t_blocks],
        }


@dataclass(frozen=True)
class Chain:
    sequence: tuple[Block, ...]

    def union(self) -> frozenset[int]:
        return frozenset().union(*(b.members for b in self.sequence))

    def to_json(self) -> list[dict]:
        return [b.to_json() for b in self.sequence]


@dataclass(frozen=True)
class LemmaCheck:
    ok: bool
    theta_s: frozenset[int] | None = None
    theta_t: frozenset[int] | None = None
    gamma: frozenset[int] | None = None

    def to_json(self) -> dict:
        if self.ok:
            return {"ok": True}
        one_based = lambda xs: sorted(i + 1 for i in xs)
        return {"ok": False, "theta_S": one_based(self.theta_s), "theta_T": one_based(self.theta_t),
                "gamma": one_based(self.gamma)}


MAX_BLOCKS = 20


def _reachable_unions(blocks: Sequence[frozenset[int]]) -> dict[int, int]:
    """Map union-mask -> first (smallest) sub-family mask producing it."""
    if len(blocks) > MAX_BLOCKS:
        raise ConditionsViolated(f"{len(blocks)} blocks; sub-family enumeration stops at {MAX_BLOCKS}")
    bmasks = [set_to_mask(b) for b in blocks]
    out: dict[int, int] = {}
    union = [0] * (1 << len(blocks))
    for theta in range(1, 1 << len(blocks)):
        low = theta & -theta
        union[theta] = union[theta ^ low] | bmasks[low.bit_length() - 1]
        out.setdefault(union[theta], theta)
    return out


def check_lemma_conditions(cp: ChainProblem) -> LemmaCheck:
    """Both families partition ``[n]`` and share no union other than ∅ and [n].

    A violation reports the common union Γ that comes first in subset
    order, together with the sub-families producing it.
    """
    check_partition(cp.ground, cp.s_blocks, "S")
    check_partition(cp.ground, cp.t_blocks, "T")
    full = (1 << cp.ground) - 1
    from_s = _reachable_unions(cp.s_blocks)
    from_t = _reachable_unions(cp.t_blocks)
    common = [g for g in from_s if g in from_t and g not in (0, full)]
    if not common:
        return LemmaCheck(True)
    gamma = min(common, key=_mask_key)
    return LemmaCheck(False, mask_to_set(from_s[gamma]), mask_to_set(from_t[gamma]), mask_to_set(gamma))


def build_chain(cp: ChainProblem) -> Chain:
    """Greedy chain cover over the blocks of both families.

    Start from the S block holding index 0, then keep appending the unused
    block that meets the running union and has the smallest least element
    (S before T on ties, then by position) until none is left.  Blocks carry
    their origin, so equal sets from the two families are distinct steps.
    """
    check = check_lemma_conditions(cp)
    if not check.ok:
        raise ConditionsViolated(f"families share the union {sorted(i + 1 for i in check.gamma)}")
    pool = cp.blocks()
    first = next(b for b in pool if b.origin == "S" and 0 in b.members)
    sequence = [first]
    covered = set(first.members)
    unused = [b for b in pool if b is not first]
    while unused:
        eligible = [b for b in unused if covered & b.members]
        if not eligible:
            break
        nxt = min(eligible, key=lambda b: (min(b.members), b.origin != "S", b.position))
        sequence.append(nxt)
        covered |= nxt.members
        unused.remove(nxt)
    if len(covered) != cp.ground or len(sequence) < 2:
        raise Stalled(f"chain stopped after {len(sequence)} blocks covering {len(covered)} of {cp.ground}")
    return Chain(tuple(sequence))


def chain_invariants_hold(chain: Chain, n: int) -> bool:
    """Cover property and the overlapping-prefix property."""
    seq = chain.sequence
    if len(seq) < 2 or chain.union() != frozenset(range(n)):
        return False
    prefix = set(seq[0].members)
    for b in seq[1:]:
        if not prefix & b.members:
            return False
        prefix |= b.members
    return True
