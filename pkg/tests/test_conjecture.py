import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kruskallab import _backend
from kruskallab.conjecture import (
    COUNTEREXAMPLE,
    HOLDS,
    NOT_APPLICABLE,
    SearchSpace,
    reduction_pairing,
    search_counterexamples,
    tight_example,
    verify_conjecture_instance,
    verify_rank_version,
    verify_two_dim_case,
)
from kruskallab.errors import BudgetExceeded, PreconditionFailed, SumsDiffer
from kruskallab.generators import random_product_set
from kruskallab.linalg import GF, QQ
from kruskallab.ranklab import catalog, tensor_rank
from kruskallab.tensors import (
    ModeSignature,
    ProductVector,
    ProductVectorSet,
    span_dims,
    sum_set,
)

e0, e1, e01 = (1, 0), (0, 1), (1, 1)
F2 = GF(2)


def cancelling_pairs(field=QQ):
    return ProductVectorSet.from_factors(
        [[e0, e0, e0], [(-1, 0), e0, e0], [e1, e1, e1], [(0, -1), e1, e1]], field)


def test_tight_example_traces():
    s3 = tight_example(3)
    assert [x.factors for x in s3] == [((1, 0),), ((0, 1),), ((-1, -1),)]
    s4 = tight_example(4)
    expected = [[e0, e0], [e0, e1], [e1, e01], [(-1, -1), e01]]
    assert list(s4) == list(ProductVectorSet.from_factors(expected, QQ))
    with pytest.raises(PreconditionFailed):
        tight_example(2)


@pytest.mark.parametrize("n", range(3, 9))
def test_tight_example_is_tight(n):
    s = tight_example(n)
    assert s.m == n - 2 and span_dims(s) == (2,) * s.m
    v = verify_two_dim_case(s)
    assert v.status == HOLDS and v.witness == {"n": n, "m_plus_2": n}
    assert verify_conjecture_instance(s).status == NOT_APPLICABLE


def test_conjecture_examples():
    v = verify_conjecture_instance(cancelling_pairs())
    assert v.status == HOLDS and v.witness == {"gamma": [1, 2]}
    nonzero = ProductVectorSet.from_factors([[e0, e0], [e1, e1]], QQ)
    v = verify_conjecture_instance(nonzero)
    assert v.status == NOT_APPLICABLE and v.premises["total_sum_zero"] is False


def test_two_dim_examples():
    parallel = ProductVectorSet.from_factors([[e0, e0], [(-1, 0), e0]], QQ)
    assert verify_two_dim_case(parallel).status == NOT_APPLICABLE


def test_two_dim_m2_n3_sweep_is_all_not_applicable():
    report = search_counterexamples(SearchSpace(F2, (2, 2), (3, 3)), "thm32")
    assert report.holds == 0 and not report.counterexamples
    assert report.not_applicable == report.scanned == 165


def test_rank_version_examples():
    v = verify_rank_version(tight_example(4, F2), 0, "kr_thm41")
    assert v.status == HOLDS and v.witness["lhs"] == 4 and v.witness["rhs"] == 4
    assert verify_rank_version(tight_example(4), 0).status == HOLDS  # r = 0 needs no oracle
    v = verify_rank_version(tight_example(4, F2), 3)
    assert v.status == NOT_APPLICABLE and v.premises["r_in_range"] is False
    with pytest.raises(ValueError):
        verify_rank_version(tight_example(4, F2), 0, "thm99")


SMALLEST_F2_RANK1 = [  # first rank-1 instance the F_2 search reaches: dims (2,2,2), n = 5
    [e1, e1, e1], [e1, e0, e0], [e0, e1, e01], [e0, e01, e0], [e01, e0, e01],
]


def test_smallest_rank_one_instance_holds():
    s = ProductVectorSet.from_factors(SMALLEST_F2_RANK1, F2)
    total = sum_set(s)
    assert tensor_rank(total).rank == 1
    # independent expansion: the five terms add up to (e0 + e1) ⊗ (e0 + e1) ⊗ e1
    by_hand = [sum(u[i] * v[j] * w[k] for u, v, w in SMALLEST_F2_RANK1) % 2
               for i in range(2) for j in range(2) for k in range(2)]
    assert list(total.entries) == by_hand
    assert total == ProductVector.of([e01, e01, e1], F2).expand()
    v = verify_rank_version(s, 1, "kr_thm41")
    assert v.status == HOLDS and v.witness == {"r": 1, "lhs": 6, "rhs": 5}


def test_rank_one_instance_over_f3():
    s = ProductVectorSet.from_factors([[e1, e1], [e0, e0], [e01, e01]], GF(3))
    assert verify_rank_version(s, 1, "kr_thm41").status == HOLDS
    assert verify_rank_version(s, 1, "conj52").status == HOLDS


def test_pairing_examples():
    s = tight_example(4, GF(3))
    result = reduction_pairing(s, s)
    assert result.pairing == (0, 1, 2, 3)
    shuffled = ProductVectorSet(s.signature, (s[2], s[0], s[3], s[1]))
    assert reduction_pairing(s, shuffled).pairing == (1, 3, 0, 2)
    with pytest.raises(SumsDiffer):
        reduction_pairing(s, ProductVectorSet(s.signature, (s[0], s[0], s[0], s[0])))


def test_pairing_obstruction_for_bipartite_identity():
    xs = ProductVectorSet.from_factors([[e0, e0], [e1, e1]], F2)
    ys = ProductVectorSet.from_factors([[e01, e0], [e1, e01]], F2)
    result = reduction_pairing(xs, ys)
    assert not result.paired and max(result.partition.sizes()) >= 4


def test_search_examples():
    report = search_counterexamples(SearchSpace(F2, (2, 2), (1, 4)), "thm32")
    assert report.counterexamples == [] and report.holds > 0
    empty = search_counterexamples(SearchSpace(F2, (2, 2), (3, 2)), "conj13")
    assert empty.to_json()["scanned"] == 0 and empty.holds == empty.not_applicable == 0
    with pytest.raises(BudgetExceeded):
        search_counterexamples(SearchSpace(F2, (2, 2, 2), (2, 5)), "conj13", budget=1000)
    with pytest.raises(PreconditionFailed):
        SearchSpace(QQ, (2, 2), (1, 3))


def test_search_scanned_counts_multisets():
    report = search_counterexamples(SearchSpace(F2, (2, 2), (2, 3)), "conj13")
    k = len(catalog(ModeSignature((2, 2), F2)))
    assert report.scanned == k * (k + 1) // 2 + k * (k + 1) * (k + 2) // 6
    assert report.scanned == report.holds + report.not_applicable


def test_search_is_deterministic_across_workers():
    space = SearchSpace(F2, (2, 2, 2), (2, 4), (1, 3))
    one = search_counterexamples(space, "thm32", workers=1).to_json()
    two = search_counterexamples(space, "thm32", workers=2).to_json()
    assert one == two


def test_search_is_identical_across_backends():
    space = SearchSpace(F2, (2, 2, 2), (2, 4))
    reports = []
    for name in _backend.available():
        previous = _backend.use(name)
        try:
            reports.append(search_counterexamples(space, "conj13").to_json())
        finally:
            _backend.use(previous)
    assert all(r == reports[0] for r in reports)
    assert reports[0]["counterexamples"] == [] and reports[0]["holds"] > 0


def test_relabel_keeps_verdict_counts_consistent():
    space = SearchSpace(F2, (2, 2), (2, 4), relabel=True)
    reduced = search_counterexamples(space, "thm32")
    full = search_counterexamples(SearchSpace(F2, (2, 2), (2, 4)), "thm32")
    assert reduced.scanned < full.scanned
    assert (reduced.holds > 0) == (full.holds > 0)
    assert reduced.counterexamples == full.counterexamples == []


def test_rank_targets_search_small():
    for target in ("thm41", "conj52"):
        report = search_counterexamples(SearchSpace(F2, (2, 2), (2, 4)), target)
        assert report.counterexamples == [] and report.holds > 0


# -- properties ------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([(2,), (2, 2), (2, 2, 2), (3, 2)]), st.integers(2, 6))
def test_rank_zero_version_matches_two_dim_case(seed, dims, n):
    rng = random.Random(seed)
    s = random_product_set(rng, F2, dims, n - 1)
    # append the negated total when it is a product vector, so zero sums are common
    total = sum_set(s)
    cat = catalog(ModeSignature(dims, F2))
    neg = tuple((-v) % 2 for v in total.entries)
    if neg in cat.index:
        s = ProductVectorSet(s.signature, s.vectors + (cat.vectors[cat.index[neg]],))
    a = verify_two_dim_case(s)
    b = verify_rank_version(s, 0, "kr_thm41")
    assert a.status == b.status
    assert a.status != COUNTEREXAMPLE


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([GF(2), GF(3), QQ]))
def test_counterexample_is_never_reported_for_random_sets(seed, field):
    rng = random.Random(seed)
    s = random_product_set(rng, field, (2, 2), rng.randint(1, 5))
    for verdict in (verify_conjecture_instance(s), verify_two_dim_case(s)):
        assert verdict.status in (HOLDS, NOT_APPLICABLE)
