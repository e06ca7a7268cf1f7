"""Exact scalars over Q and small prime fields, and dense exact matrices.

Scalars are plain Python values: ``int`` residues in ``[0, p)`` for a prime
field and :class:`fractions.Fraction` for the rationals.  Both are immutable
and compare structurally once canonical, so no wrapper class is needed; the
:class:`FieldSpec` carries the arithmetic.

>>> F = FieldSpec.prime(3)
>>> F.mul(2, 2)
1
>>> matrix_rank(Matrix.from_rows([[1, 2], [2, 4]], QQ))
1
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm

from . import _backend
from .errors import (
    FieldMismatch,
    ParseError,
    ShapeMismatch,
    SpanIsFullSpace,
    UnsupportedField,
)

SUPPORTED_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # "rationals" | "prime_field"
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.p is not None:
                raise UnsupportedField("the rationals take no modulus")
        elif self.kind == "prime_field":
            if self.p not in SUPPORTED_PRIMES:
                raise UnsupportedField(f"p={self.p} not in {SUPPORTED_PRIMES}")
        else:
            raise UnsupportedField(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("rationals")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("prime_field", p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """``"Q"`` or a prime such as ``"3"`` (the CLI ``--field`` syntax)."""
        if text.strip().upper() in ("Q", "QQ", "RATIONALS"):
            return cls.rationals()
        try:
            return cls.prime(int(text))
        except ValueError:
            raise UnsupportedField(f"cannot read field {text!r}") from None

    @property
    def is_finite(self) -> bool:
        return self.kind == "prime_field"

    @property
    def modulus(self) -> int:
        """``p`` for prime fields, 0 for Q (the kernel convention)."""
        return self.p or 0

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    # -- elements ---------------------------------------------------------

    def __call__(self, x) -> int | Fraction:
        """Canonical representative of ``x`` (int, Fraction or string)."""
        if isinstance(x, str):
            return self.parse_scalar(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, bool) or not isinstance(x, int):
            raise TypeError(f"cannot coerce {type(x).__name__} into {self}")
        return x % self.p

    def parse_scalar(self, text: str) -> int | Fraction:
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a scalar: {text!r}") from None
        if self.p is not None and value.denominator != 1:
            raise ParseError(f"{text!r} is not an integer residue")
        return self(value)

    def format_scalar(self, x) -> str:
        """Decimal residue for F_p, ``"num/den"`` (or an integer) for Q."""
        return str(self(x))

    zero = property(lambda self: self(0))
    one = property(lambda self: self(1))

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def neg(self, a):
        return -a if self.p is None else -a % self.p

    def mul(self, a, b):
        return a * b if self.p is None else a * b % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        if self.p is None:
            raise ValueError("Q is infinite")
        return range(self.p)


QQ = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)


# -- vectors ----------------------------------------------------------------

def vec(field: FieldSpec, values: Iterable) -> tuple:
    return tuple(field(v) for v in values)


def vec_add(field: FieldSpec, u: Sequence, v: Sequence) -> tuple:
    return tuple(field.add(a, b) for a, b in zip(u, v))


def vec_scale(field: FieldSpec, c, v: Sequence) -> tuple:
    return tuple(field.mul(c, a) for a in v)


def leading(v: Sequence):
    """First nonzero entry, or None."""
    return next((a for a in v if a), None)


# -- matrices ---------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    nrows: int
    ncols: int
    entries: tuple  # row-major, canonical scalars
    field: FieldSpec

    def __post_init__(self):
        if self.nrows * self.ncols != len(self.entries):
            raise ShapeMismatch(f"{self.nrows}x{self.ncols} needs {self.nrows * self.ncols} entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: FieldSpec, ncols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ShapeMismatch("column count is ambiguous for an empty row list")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(len(rows), ncols, tuple(field(x) for r in rows for x in r), field)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], field: FieldSpec, nrows: int | None = None) -> Matrix:
        cols = [list(c) for c in cols]
        if not cols:
            return cls(nrows or 0, 0, (), field)
        return cls.from_rows([list(r) for r in zip(*cols)], field, ncols=len(cols))

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: FieldSpec) -> Matrix:
        return cls(nrows, ncols, (field.zero,) * (nrows * ncols), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> Matrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], field)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def rows(self) -> list[tuple]:
        c = self.ncols
        return [self.entries[i * c:(i + 1) * c] for i in range(self.nrows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.ncols + j]

    @property
    def T(self) -> Matrix:
        cols = [self.entries[j::self.ncols] for j in range(self.ncols)] if self.nrows else [()] * self.ncols
        return Matrix(self.ncols, self.nrows, tuple(x for col in cols for x in col), self.field)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        F = self.field
        cols = other.T.rows()
        out = []
        for row in self.rows():
            for col in cols:
                s = sum(a * b for a, b in zip(row, col))
                out.append(F(s))
        return Matrix(self.nrows, other.ncols, tuple(out), F)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise ShapeMismatch(f"vector of length {len(v)} for {self.shape}")
        return tuple(self.field(sum(a * b for a, b in zip(row, v))) for row in self.rows())

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        return matrix_rank(self)


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for row in m.rows():
        den = reduce(lcm, (x.denominator for x in row), 1)
        out.append([int(x * den) for x in row])
    return out


def _bareiss_rank(rows: list[list[int]]) -> int:
    """Fraction-free elimination over Z; the rank over Q of the same rows."""
    rows = [r[:] for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank, prev = 0, 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        top = rows[rank]
        for r in range(rank + 1, nrows):
            row = rows[r]
            for c in range(col + 1, ncols):
                row[c] = (top[col] * row[c] - row[col] * top[c]) // prev
            row[col] = 0
        prev = top[col]
        rank += 1
    return rank


def matrix_rank(m: Matrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.field.is_finite:
        return _backend.kernels().rank_mod_p(m.entries, m.nrows, m.ncols, m.field.p)
    return _bareiss_rank(_integer_rows(m))


def rank_of_vectors(field: FieldSpec, vectors: Sequence[Sequence]) -> int:
    """dim span of the given vectors (treated as matrix rows)."""
    vectors = list(vectors)
    if not vectors:
        return 0
    return matrix_rank(Matrix.from_rows(vectors, field))


def rref(m: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivoting takes the first nonzero entry going down each column, so the
    result is a deterministic function of the input.
    """
    F = m.field
    rows = [list(r) for r in m.rows()]
    pivots: list[int] = []
    r = 0
    for col in range(m.ncols):
        piv = next((i for i in range(r, m.nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][col])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(m.nrows):
            f = rows[i][col]
            if i != r and f:
                rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m.nrows:
            break
    return rows[:r], pivots


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of ``{v : m v = 0}``, one vector per free column of the RREF.

    Each vector has a 1 at its free column, zeros at the other free columns,
    and the negated RREF entries at the pivot columns.
    """
    F = m.field
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = [F.zero] * m.ncols
        v[free] = F.one
        for row, pc in zip(reduced, pivots):
            v[pc] = F.neg(row[free])
        basis.append(tuple(v))
    return basis


def annihilator(vectors: Sequence[Sequence], field: FieldSpec, dim: int | None = None) -> Matrix:
    """Matrix whose kernel is exactly ``span(vectors)``.

    Rows are the kernel basis of the matrix having ``vectors`` as rows, so the
    output has ``dim - dim span`` rows and full row rank.
    """
    vectors = [vec(field, v) for v in vectors]
    if not vectors:
        raise ValueError("annihilator needs at least one vector")
    d = len(vectors[0]) if dim is None else dim
    if any(len(v) != d for v in vectors):
        raise ShapeMismatch("vectors of unequal length")
    rows = kernel_basis(Matrix.from_rows(vectors, field))
    if not rows:
        raise SpanIsFullSpace(f"the vectors span all of {field}^{d}")
    return Matrix.from_rows(rows, field)
