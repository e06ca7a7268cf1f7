"""Compiled vs pure-Python kernel timings.

Run from the repository root after ``pip install -e . --no-build-isolation``::

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each case runs under both backends, checks that the results agree, and
prints the best wall time and the speedup.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from kruskallab import _backend
from kruskallab.conjecture import SearchSpace, search_counterexamples
from kruskallab.linalg import GF
from kruskallab.ranklab import catalog, tensor_rank
from kruskallab.tensors import ModeSignature, ProductVectorSet, sum_set


def _random_flat(rng, rows, cols, p):
    return [rng.randrange(p) for _ in range(rows * cols)]


def cases():
    rng = random.Random(2024)
    flats = [_random_flat(rng, 40, 40, 7) for _ in range(20)]
    masks_input = _random_flat(rng, 18, 8, 2)
    sig = ModeSignature((2, 2, 2), GF(3))
    cat = catalog(sig)
    w = sum_set(ProductVectorSet.from_factors([[(0, 1), (1, 0), (1, 0)], [(1, 0), (0, 1), (1, 0)],
                                              [(1, 0), (1, 0), (0, 1)]], GF(3)))
    target = tuple(w.entries)
    space = SearchSpace(GF(2), (2, 2, 2), (2, 4), (1, 3))

    def k():
        return _backend.kernels()

    return [
        ("rank_mod_p 20x (40x40, F_7)", lambda: [k().rank_mod_p(f, 40, 40, 7) for f in flats]),
        ("zero_sum_masks (n=18, F_2)", lambda: k().zero_sum_masks(masks_input, 18, 8, 2)),
        ("find_multisets r=3 (F_3 2x2x2)", lambda: k().find_multisets(cat.flat, len(cat), 8, target, 3, 3)),
        ("tensor_rank W state (F_3)", lambda: tensor_rank(w).rank),
        ("search thm32 F_2 (2,2,2) n<=4", lambda: search_counterexamples(space, "thm32").to_json()),
    ]


def best_of(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = _backend.available()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend is available", file=sys.stderr)
    print(f"{'case':34s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    previous = _backend.name()
    try:
        for label, fn in cases():
            times, results = [], []
            for b in backends:
                _backend.use(b)
                t, r = best_of(fn, args.repeat)
                times.append(t)
                results.append(r)
            if any(r != results[0] for r in results):
                print(f"{label}: backends disagree", file=sys.stderr)
                return 1
            row = f"{label:34s}" + "".join(f"{t:11.4f}s" for t in times)
            if len(times) > 1:
                row += f"{times[1] / times[0]:11.1f}x"
            print(row)
    finally:
        _backend.use(previous)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
