"""Seeded random instances for tests, the acceptance runs and ``--seed``.

All functions take a :class:`random.Random` so a seed fixes the output.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from fractions import Fraction
from itertools import pairwise

from .kruskal import certify_uniqueness
from .linalg import FieldSpec
from .tensors import ModeSignature, ProductVector, ProductVectorSet, span_dims
from .zerosum import ChainProblem, check_lemma_conditions


def random_scalar(rng: random.Random, field: FieldSpec, spread: int = 3):
    if field.is_finite:
        return rng.randrange(field.p)
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(rng.randint(-spread, spread), den)


def random_vector(rng: random.Random, field: FieldSpec, d: int) -> tuple:
    while True:
        v = tuple(random_scalar(rng, field) for _ in range(d))
        if any(v):
            return tuple(field(x) for x in v)


def random_product_vector(rng: random.Random, sig: ModeSignature) -> ProductVector:
    return ProductVector(sig, tuple(random_vector(rng, sig.field, d) for d in sig.dims))


def random_product_set(rng: random.Random, field: FieldSpec, dims: Sequence[int], n: int) -> ProductVectorSet:
    sig = ModeSignature(tuple(dims), field)
    return ProductVectorSet(sig, tuple(random_product_vector(rng, sig) for _ in range(n)))


def random_partition(rng: random.Random, n: int, blocks: int) -> tuple[frozenset[int], ...]:
    """Uniform-ish partition of ``range(n)`` into exactly ``blocks`` nonempty parts."""
    order = list(range(n))
    rng.shuffle(order)
    cuts = sorted(rng.sample(range(1, n), blocks - 1))
    bounds = [0, *cuts, n]
    return tuple(frozenset(order[a:b]) for a, b in pairwise(bounds))


def random_chain_problem(rng: random.Random, n: int, tries: int = 1000) -> ChainProblem:
    """Two partitions of ``range(n)`` sharing no union besides the trivial ones."""
    for _ in range(tries):
        s = random_partition(rng, n, rng.randint(1, n))
        t = random_partition(rng, n, rng.randint(1, n))
        cp = ChainProblem(n, s, t)
        if check_lemma_conditions(cp).ok:
            return cp
    raise RuntimeError(f"no admissible chain problem for n={n} in {tries} tries")


def random_bipartite_set(rng: random.Random, field: FieldSpec, dims: Sequence[int],
                         n: int, tries: int = 1000) -> ProductVectorSet:
    """Two-mode set whose span dimensions satisfy ``n + 1 <= d_1 + d_2``."""
    for _ in range(tries):
        s = random_product_set(rng, field, dims, n)
        d = span_dims(s)
        if n + 1 <= d[0] + d[1]:
            return s
    raise RuntimeError("premise never met; pick smaller n or larger dims")


def random_certified_set(rng: random.Random, field: FieldSpec, dims: Sequence[int],
                         n: int, tries: int = 1000) -> ProductVectorSet:
    """A set that Kruskal's criterion certifies."""
    for _ in range(tries):
        s = random_product_set(rng, field, dims, n)
        if certify_uniqueness(s).certified:
            return s
    raise RuntimeError("no certified set found")
