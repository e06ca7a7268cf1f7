"""Pure-Python kernels.

Reference implementations of the hot loops.  ``_kernels.pyx`` implements the
same three functions with identical results; :mod:`kruskallab._backend` picks
one at import.  All vectors arrive flattened row-major as sequences of ints
already reduced into ``[0, p)``.  ``p == 0`` means plain integer arithmetic
(used for rational data after clearing denominators); only this module
supports it.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

NAME = "python"


def rank_mod_p(flat, nrows: int, ncols: int, p: int) -> int:
    rows = [list(flat[i * ncols:(i + 1) * ncols]) for i in range(nrows)]
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        top = rows[rank]
        inv = pow(top[col], -1, p)
        top[:] = [v * inv % p for v in top]
        for r in range(rank + 1, nrows):
            f = rows[r][col]
            if f:
                row = rows[r]
                for c in range(col, ncols):
                    row[c] = (row[c] - f * top[c]) % p
        rank += 1
    return rank


def zero_sum_masks(flat, n: int, length: int, p: int) -> list[int]:
    """Every nonempty bitmask over ``n`` vectors whose sum vanishes.

    Walks the subsets in binary-reflected Gray code order so each step adds
    or removes a single vector.  Output is sorted ascending.
    """
    vecs = [flat[i * length:(i + 1) * length] for i in range(n)]
    acc = [0] * length
    nonzero = 0
    mask = 0
    found = []
    for step in range(1, 1 << n):
        bit = (step & -step).bit_length() - 1
        mask ^= 1 << bit
        v = vecs[bit]
        sign = 1 if mask >> bit & 1 else -1
        for c in range(length):
            x = v[c]
            if not x:
                continue
            old = acc[c]
            new = old + sign * x
            if p:
                new %= p
            acc[c] = new
            nonzero += (new != 0) - (old != 0)
        if nonzero == 0:
            found.append(mask)
    found.sort()
    return found


def find_multisets(flat, count: int, length: int, target, r: int, p: int,
                   firsts=None, max_hits: int = -1) -> list[tuple[int, ...]]:
    """Nondecreasing index tuples of length ``r`` whose vectors sum to ``target``.

    The candidate vectors must be pairwise distinct (a catalog).  Results
    come out in lexicographic order; ``firsts`` restricts the smallest index
    (must be ascending).  ``max_hits < 1`` means no limit.
    """
    target = tuple(target)
    if r == 0:
        return [()] if not any(target) else []
    vecs = [tuple(flat[i * length:(i + 1) * length]) for i in range(count)]
    lookup = {v: i for i, v in enumerate(vecs)}
    starts = range(count) if firsts is None else firsts
    hits: list[tuple[int, ...]] = []
    if r == 1:
        k = lookup.get(target)
        if k is not None and (firsts is None or k in set(firsts)):
            hits.append((k,))
        return hits
    for f in starts:
        for rest in combinations_with_replacement(range(f, count), r - 2):
            prefix = (f,) + rest
            res = list(target)
            for i in prefix:
                vi = vecs[i]
                for c in range(length):
                    res[c] -= vi[c]
            if p:
                res = [x % p for x in res]
            k = lookup.get(tuple(res))
            if k is not None and k >= prefix[-1]:
                hits.append(prefix + (k,))
                if 0 < max_hits <= len(hits):
                    return hits
    return hits
