from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kruskallab.errors import (
    BudgetExceeded,
    NotIndependent,
    PreconditionFailed,
    RankExceedsBound,
    RationalsNotEnumerable,
    RationalsRequireProductSpan,
    WrongRank,
)
from kruskallab.linalg import GF, QQ
from kruskallab.ranklab import (
    catalog,
    classify_2d_subspace,
    enumerate_product_vectors,
    is_product_sum_pair,
    nonparallel_mode_bound_check,
    product_vector_count,
    rank_at_most,
    tensor_rank,
    unique_decomposition_check,
)
from kruskallab.tensors import (
    DenseTensor,
    ModeSignature,
    ProductVector,
    ProductVectorSet,
    expand_product,
    linear_combination,
    sum_set,
)

e0, e1, e01 = (1, 0), (0, 1), (1, 1)
F2, F3 = GF(2), GF(3)


def ghz(field=F2):
    return sum_set(ProductVectorSet.from_factors([[e0, e0, e0], [e1, e1, e1]], field))


def identity2(field=F2):
    return sum_set(ProductVectorSet.from_factors([[e0, e0], [e1, e1]], field))


@pytest.mark.parametrize("field,dims,count", [(F2, (2,), 3), (F2, (2, 2), 9), (F3, (2, 2), 32),
                                              (F2, (2, 2, 2), 27), (GF(5), (3, 2), 744)])
def test_enumeration_counts(field, dims, count):
    sig = ModeSignature(dims, field)
    vectors = list(enumerate_product_vectors(sig))
    assert len(vectors) == len({x.entries for x in vectors}) == count == product_vector_count(sig)
    assert vectors == sorted(vectors, key=lambda x: x.factors)


def test_enumeration_guards():
    with pytest.raises(RationalsNotEnumerable):
        next(enumerate_product_vectors(ModeSignature((2,), QQ)))
    with pytest.raises(BudgetExceeded):
        next(enumerate_product_vectors(ModeSignature((3, 3, 3), GF(7)), budget=1000))


def test_rank_examples():
    sig = ModeSignature((2, 2, 2), F2)
    assert tensor_rank(DenseTensor.zeros(sig)).rank == 0
    x = ProductVector.of([e01, e1, e0], F2)
    result = tensor_rank(expand_product(x))
    assert result.rank == 1 and result.witness == (x,)
    result = tensor_rank(ghz())
    assert result.rank == 2 and result.method == "flattening_bound_met"
    assert sum_set(ProductVectorSet(sig, result.witness)) == ghz()


def test_w_state_needs_exhaustive_search():
    w = sum_set(ProductVectorSet.from_factors([[e1, e0, e0], [e0, e1, e0], [e0, e0, e1]], F3))
    result = tensor_rank(w)
    assert result.rank == 3 and result.method == "exhaustive" and result.lower_bound == 2
    with pytest.raises(RankExceedsBound) as info:
        tensor_rank(w, max_r=2)
    assert info.value.lower_bound == 3
    assert not rank_at_most(w, 2) and rank_at_most(w, 3)


def test_rank_over_rationals():
    assert tensor_rank(ghz(QQ).scaled(0)).rank == 0
    with pytest.raises(RationalsNotEnumerable):
        tensor_rank(ghz(QQ))


def test_uniqueness_examples():
    assert unique_decomposition_check(ghz(), 2).unique
    result = unique_decomposition_check(identity2(), 2)
    assert not result.unique and result.count >= 2
    other = {(x.factors) for d in result.decompositions for x in d}
    assert ((1, 1), (1, 0)) in other and ((0, 1), (1, 1)) in other
    x = expand_product(ProductVector.of([e0, e1], F2))
    assert unique_decomposition_check(x, 1).unique
    with pytest.raises(WrongRank):
        unique_decomposition_check(ghz(), 1)
    with pytest.raises(WrongRank):
        unique_decomposition_check(ghz(), 3)


def test_pair_examples():
    pair = is_product_sum_pair(ProductVector.of([e0, e0], QQ), ProductVector.of([e1, e0], QQ))
    assert pair.kind == "product" and pair.result == ProductVector.of([e01, e0], QQ)
    pair = is_product_sum_pair(ProductVector.of([e0, e0], QQ), ProductVector.of([e1, e1], QQ))
    assert pair.kind == "entangled" and pair.nonparallel == (0, 1)
    x = ProductVector.of([e0, (2, 3)], QQ)
    assert is_product_sum_pair(x, x, 1, -1).kind == "zero"


def test_nonparallel_bound_examples():
    s = ProductVectorSet.from_factors([[e0, e1]], QQ)
    assert nonparallel_mode_bound_check(s, [1]).count == 0
    s = ProductVectorSet.from_factors([[e0, e0], [e1, e0]], QQ)
    assert nonparallel_mode_bound_check(s, [1, 1]).to_json() == {"nonparallel_modes": 1, "bound": 1, "holds": True}
    with pytest.raises(PreconditionFailed):
        nonparallel_mode_bound_check(ProductVectorSet.from_factors([[e0, e0], [e1, e1]], QQ), [1, 1])
    with pytest.raises(PreconditionFailed):
        nonparallel_mode_bound_check(ProductVectorSet.from_factors([[e0, e0], [e0, e0]], QQ), [1, 1])


def test_subspace_examples():
    a = expand_product(ProductVector.of([e0, e0], F2))
    b = expand_product(ProductVector.of([e0, e1], F2))
    c = expand_product(ProductVector.of([e1, e1], F2))
    assert classify_2d_subspace(a, b).category == 1
    assert classify_2d_subspace(a, c).category == 2
    cat3 = classify_2d_subspace(a + c, b)
    assert cat3.category == 3 and cat3.product_lines == (b,)
    with pytest.raises(NotIndependent):
        classify_2d_subspace(a, a)


def test_subspace_over_rationals():
    a = expand_product(ProductVector.of([e0, e0], QQ))
    b = expand_product(ProductVector.of([e0, e1], QQ))
    c = expand_product(ProductVector.of([e1, e1], QQ))
    assert classify_2d_subspace(a, b).category == 1
    assert classify_2d_subspace(a, c).category == 2
    with pytest.raises(RationalsRequireProductSpan):
        classify_2d_subspace(a + c, b)


def test_subspace_category_four():
    """Over F_2 no line of span{GHZ, W} is a product vector."""
    ghz_ = ghz()
    w = sum_set(ProductVectorSet.from_factors([[e1, e0, e0], [e0, e1, e0], [e0, e0, e1]], F2))
    assert classify_2d_subspace(ghz_, w).category == 4


def test_every_2x2x2_plane_over_f2_has_allowed_count():
    vectors = [DenseTensor.from_entries((2, 2, 2), e, F2) for e in product(range(2), repeat=8)][1:]
    seen = set()
    for i, v1 in enumerate(vectors):
        for v2 in vectors[i + 1:i + 40]:
            result = classify_2d_subspace(v1, v2)
            assert len(result.product_lines) in (0, 1, 2, 3)
            seen.add(result.category)
    assert seen == {1, 2, 3, 4}


# -- properties ------------------------------------------------------------------

@given(st.data())
def test_pair_statements_equivalent_over_f3(data):
    """Product (or zero) for one nonzero coefficient pair means the same for all."""
    cat = catalog(ModeSignature((2, 2, 2), F3))
    x1 = data.draw(st.sampled_from(cat.vectors))
    x2 = data.draw(st.sampled_from(cat.vectors))
    kinds = set()
    for a1, a2 in product((1, 2), repeat=2):
        pair = is_product_sum_pair(x1, x2, a1, a2)
        oracle = tensor_rank(linear_combination(ProductVectorSet.of([x1, x2]), [a1, a2])).rank
        assert (pair.kind in ("product", "zero")) == (oracle <= 1)
        if pair.kind == "product":
            assert expand_product(pair.result) == linear_combination(ProductVectorSet.of([x1, x2]), [a1, a2])
        kinds.add(pair.kind != "entangled")
    assert len(kinds) == 1


@given(st.data())
def test_witness_sums_to_tensor(data):
    entries = data.draw(st.lists(st.integers(0, 2), min_size=8, max_size=8))
    t = DenseTensor.from_entries((2, 2, 2), entries, F3)
    result = tensor_rank(t)
    assert len(result.witness) == result.rank
    total = DenseTensor.zeros(t.signature)
    for x in result.witness:
        total = total + expand_product(x)
    assert total == t
