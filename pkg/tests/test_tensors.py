from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kruskallab.conjecture import tight_example
from kruskallab.errors import IndexOutOfRange, LastMode, TensorTooLarge, ZeroFactor
from kruskallab.linalg import GF, QQ, Matrix, matrix_rank
from kruskallab.ranklab import enumerate_product_vectors, tensor_rank
from kruskallab.tensors import (
    DenseTensor,
    ModeSignature,
    ProductVector,
    ProductVectorSet,
    drop_mode,
    expand_product,
    factor_product,
    flattening_ranks,
    is_product_tensor,
    span_dims,
    sum_set,
    unfold,
)

e0, e1 = (1, 0), (0, 1)
F3 = GF(3)


def pv(factors, field=QQ):
    return ProductVector.of(factors, field)


def test_expand_examples():
    t = expand_product(pv([e0, e0]))
    assert t.entries == (1, 0, 0, 0)
    t = expand_product(pv([(1, 1), e1]))
    assert t[(0, 1)] == 1 and t[(1, 1)] == 1 and t[(0, 0)] == 0
    with pytest.raises(ZeroFactor):
        pv([e0, (0, 0)])


def test_normalization_folds_scalars_into_first_factor():
    x = pv([(2, 0), (0, 3), (5, 5)])
    assert x.factors == ((30, 0), (0, 1), (1, 1))
    y = ProductVector.of([(0, 0, 1), (2, 4)], GF(5))
    assert y.factors == ((0, 0, 2), (1, 2))


def test_sum_set_examples():
    s = tight_example(3)
    assert sum_set(s).is_zero()
    assert sum_set(s, []).is_zero()
    assert sum_set(s, [1]) == expand_product(s[1])
    with pytest.raises(IndexOutOfRange):
        sum_set(s, [3])


def test_unfold_examples():
    u, v = (1, 2), (3, 1, 1)
    t = expand_product(pv([u, v]))
    outer = Matrix.from_rows([[a * b for b in v] for a in u], QQ)
    assert unfold(t, 0) == outer
    ghz = sum_set(ProductVectorSet.from_factors([[e0, e0, e0], [e1, e1, e1]], QQ))
    assert all(matrix_rank(unfold(ghz, j)) == 2 for j in range(3))
    z = DenseTensor.zeros(ModeSignature((2, 3), QQ))
    assert unfold(z, 1).is_zero()


def test_unfold_column_order():
    t = DenseTensor.from_entries((2, 2, 2), range(8), QQ)
    assert unfold(t, 1).rows() == [(0, 1, 4, 5), (2, 3, 6, 7)]


def test_drop_mode_examples():
    u, v, w = (1, 2), (0, 1), (3, 3)
    assert drop_mode(pv([u, v, w]), 1) == pv([u, w])
    assert drop_mode(pv([u, v]), 0) == pv([v])
    with pytest.raises(LastMode):
        drop_mode(pv([u]), 0)


def test_span_dims_examples():
    assert span_dims(ProductVectorSet.from_factors([[e0, e0], [e1, e1]], QQ)) == (2, 2)
    assert span_dims(ProductVectorSet.from_factors([[e0, e0], [e0, e1]], QQ)) == (1, 2)
    assert span_dims(tight_example(4)) == (2, 2)


def test_size_guard():
    with pytest.raises(TensorTooLarge):
        ModeSignature((2,) * 21, QQ)


def test_factor_product_recovers_vector():
    x = pv([(2, -1), (0, 3), ("1/2", 1)])
    assert factor_product(expand_product(x)) == x


def test_flattening_bounds_rank_on_every_small_tensor():
    """Every 2x2x2 tensor over F_2: flattenings bound the oracle rank from below."""
    F = GF(2)
    for entries in product(range(2), repeat=8):
        t = DenseTensor.from_entries((2, 2, 2), entries, F)
        rank = tensor_rank(t).rank
        assert max(flattening_ranks(t)) <= rank <= 3
        assert (rank == 1) == is_product_tensor(t)


# -- properties ------------------------------------------------------------------

scalars = st.fractions(min_value=-5, max_value=5, max_denominator=5)
nonzero_vec = st.lists(scalars, min_size=2, max_size=3).filter(any)


@given(st.lists(nonzero_vec, min_size=1, max_size=3), st.integers(0, 2), scalars.filter(bool))
def test_expansion_is_multilinear(factors, j, alpha):
    j %= len(factors)
    x = pv(factors)
    scaled = [list(f) for f in factors]
    scaled[j] = [alpha * c for c in scaled[j]]
    assert expand_product(pv(scaled)) == expand_product(x).scaled(alpha)


@given(st.lists(nonzero_vec, min_size=1, max_size=3), st.lists(scalars.filter(bool), min_size=3, max_size=3))
def test_normalization_is_canonical(factors, scales):
    x = pv(factors)
    assert pv(x.factors) == x
    rescaled = [[c * a for c in f] for f, a in zip(factors, scales)]
    prod_scale = 1
    for a in scales[:len(factors)]:
        prod_scale *= a
    first = [[c / prod_scale for c in rescaled[0]], *rescaled[1:]]
    assert pv(first) == x


@st.composite
def product_sets(draw, field=F3):
    dims = draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))
    sig = ModeSignature(tuple(dims), field)
    catalog = list(enumerate_product_vectors(sig))
    vectors = draw(st.lists(st.sampled_from(catalog), min_size=1, max_size=6))
    return ProductVectorSet(sig, tuple(vectors))


@given(product_sets(), st.data())
def test_sum_splits_over_complement(s, data):
    gamma = data.draw(st.sets(st.integers(0, s.n - 1)))
    rest = set(range(s.n)) - gamma
    assert sum_set(s, gamma) + sum_set(s, rest) == sum_set(s)


@given(product_sets())
def test_equal_as_tensors_iff_equal_canonically(s):
    for x in s:
        for y in s:
            assert (x == y) == (x.entries == y.entries)
