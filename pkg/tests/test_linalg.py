from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kruskallab.errors import SpanIsFullSpace, UnsupportedField
from kruskallab.linalg import (
    GF,
    QQ,
    FieldSpec,
    Matrix,
    annihilator,
    kernel_basis,
    matrix_rank,
    rank_of_vectors,
    rref,
)

FIELDS = [QQ, GF(2), GF(3), GF(5), GF(7)]


def test_rank_examples():
    assert matrix_rank(Matrix.identity(2, QQ)) == 2
    assert matrix_rank(Matrix.from_rows([[1, 1], [1, 1]], GF(2))) == 1
    assert matrix_rank(Matrix.from_rows([[1, 2], [2, 4]], QQ)) == 1


def test_rank_depends_on_field():
    m = [[1, 2], [3, 4]]  # det -2
    assert matrix_rank(Matrix.from_rows(m, QQ)) == 2
    assert matrix_rank(Matrix.from_rows(m, GF(2))) == 1
    assert matrix_rank(Matrix.from_rows(m, GF(3))) == 2


def test_kernel_examples():
    assert kernel_basis(Matrix.from_rows([[1, 1]], GF(2))) == [(1, 1)]
    assert kernel_basis(Matrix.identity(3, QQ)) == []
    assert kernel_basis(Matrix.zeros(2, 2, QQ)) == [(1, 0), (0, 1)]


def test_annihilator_examples():
    F = GF(2)
    assert annihilator([(1, 0)], F).rows() == [(0, 1)]
    pi = annihilator([(1, 1)], F)
    assert pi.rows() == [(1, 1)]
    assert pi.apply((1, 1)) == (0,)
    with pytest.raises(SpanIsFullSpace):
        annihilator([(1, 0), (0, 1)], QQ)


def test_scalars_are_canonical():
    assert QQ("2/4") == Fraction(1, 2)
    assert QQ.format_scalar(QQ("-6/4")) == "-3/2"
    assert GF(5)(-1) == 4
    assert GF(7).inv(3) == 5
    assert QQ.parse_scalar("3") == 3


def test_unsupported_fields():
    for text in ("4", "11", "R"):
        with pytest.raises(UnsupportedField):
            FieldSpec.parse(text)


def test_rref_pivots():
    rows, pivots = rref(Matrix.from_rows([[0, 2, 4], [1, 1, 1]], QQ))
    assert pivots == [0, 1]
    assert rows[1] == [0, 1, 2]


# -- properties ------------------------------------------------------------------

@st.composite
def matrices(draw, field=None, max_dim=5):
    F = field or draw(st.sampled_from(FIELDS))
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    if F.is_finite:
        elem = st.integers(0, F.p - 1)
    else:
        elem = st.fractions(min_value=-4, max_value=4, max_denominator=4)
    rows = draw(st.lists(st.lists(elem, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix.from_rows(rows, F)


@given(matrices())
def test_rank_equals_transpose_rank(m):
    assert matrix_rank(m) == matrix_rank(m.T) <= min(m.nrows, m.ncols)


@given(matrices())
def test_kernel_is_exact_and_complementary(m):
    basis = kernel_basis(m)
    assert len(basis) + matrix_rank(m) == m.ncols
    for v in basis:
        assert not any(m.apply(v))
    if basis:
        assert rank_of_vectors(m.field, basis) == len(basis)


@settings(max_examples=150)
@given(st.data())
def test_sylvester_inequality(data):
    F = data.draw(st.sampled_from(FIELDS))
    a = data.draw(matrices(field=F))
    b_cols = data.draw(st.integers(1, 5))
    elem = st.integers(0, F.p - 1) if F.is_finite else st.integers(-3, 3)
    rows = data.draw(st.lists(st.lists(elem, min_size=b_cols, max_size=b_cols),
                              min_size=a.ncols, max_size=a.ncols))
    b = Matrix.from_rows(rows, F)
    assert matrix_rank(a @ b) >= matrix_rank(a) + matrix_rank(b) - a.ncols
    assert matrix_rank(a @ b) <= min(matrix_rank(a), matrix_rank(b))


@given(matrices())
def test_annihilator_kills_exactly_the_span(m):
    vectors = m.rows()
    d = m.ncols
    span = rank_of_vectors(m.field, vectors)
    if span == 0:
        return
    if span == d:
        with pytest.raises(SpanIsFullSpace):
            annihilator(vectors, m.field)
        return
    pi = annihilator(vectors, m.field)
    assert all(not any(pi.apply(v)) for v in vectors)
    assert matrix_rank(pi) + span == d


@given(st.sampled_from(FIELDS[1:]), st.integers(), st.integers())
def test_prime_field_arithmetic(F, a, b):
    a, b = F(a), F(b)
    assert F.add(a, b) == (a + b) % F.p
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.mul(F.div(a, b), b) == a
