"""Product vectors, sets of them, and dense exact tensors.

Modes are 0-based throughout the Python API.  Dense tensors are stored
row-major with mode 0 varying slowest.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from math import prod

from .errors import (
    FieldMismatch,
    IndexOutOfRange,
    LastMode,
    ShapeMismatch,
    TensorTooLarge,
    ZeroFactor,
)
from .linalg import FieldSpec, Matrix, leading, matrix_rank, rank_of_vectors

MAX_ENTRIES = 2 ** 20


@dataclass(frozen=True)
class ModeSignature:
    dims: tuple[int, ...]
    field: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.dims:
            raise ShapeMismatch("at least one mode is required")
        if any(d < 1 for d in self.dims):
            raise ShapeMismatch(f"dimensions must be positive, got {self.dims}")
        if prod(self.dims) > MAX_ENTRIES:
            raise TensorTooLarge(f"{self.dims} has more than {MAX_ENTRIES} entries")

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return prod(self.dims)

    def strides(self) -> tuple[int, ...]:
        out, s = [], 1
        for d in reversed(self.dims):
            out.append(s)
            s *= d
        return tuple(reversed(out))

    def without(self, j: int) -> ModeSignature:
        return ModeSignature(self.dims[:j] + self.dims[j + 1:], self.field)


def _normalize(field: FieldSpec, factors: Sequence[tuple]) -> tuple[tuple, ...]:
    """Leading entry 1 in every factor after the first; scalar goes to factor 0."""
    scale = field.one
    out = [None]
    for f in factors[1:]:
        lead = leading(f)
        inv = field.inv(lead)
        scale = field.mul(scale, lead)
        out.append(tuple(field.mul(inv, x) for x in f))
    out[0] = tuple(field.mul(scale, x) for x in factors[0])
    return tuple(out)


@dataclass(frozen=True)
class ProductVector:
    """An elementary tensor ``x_0 ⊗ ... ⊗ x_{m-1}`` kept in canonical form.

    Two instances are equal exactly when they expand to the same tensor.
    """

    signature: ModeSignature
    factors: tuple[tuple, ...]

    def __post_init__(self):
        F = self.signature.field
        factors = tuple(tuple(F(x) for x in f) for f in self.factors)
        if len(factors) != self.signature.m:
            raise ShapeMismatch(f"{len(factors)} factors for {self.signature.m} modes")
        for j, (f, d) in enumerate(zip(factors, self.signature.dims)):
            if len(f) != d:
                raise ShapeMismatch(f"factor {j} has length {len(f)}, mode dimension is {d}")
            if not any(f):
                raise ZeroFactor(f"factor {j} is zero", location={"mode": j})
        object.__setattr__(self, "factors", _normalize(F, factors))

    @classmethod
    def of(cls, factors: Sequence[Sequence], field: FieldSpec) -> ProductVector:
        factors = [tuple(f) for f in factors]
        return cls(ModeSignature(tuple(len(f) for f in factors), field), tuple(factors))

    @property
    def field(self) -> FieldSpec:
        return self.signature.field

    @property
    def m(self) -> int:
        return self.signature.m

    def scaled(self, c) -> ProductVector:
        F = self.field
        c = F(c)
        if not c:
            raise ZeroFactor("scaling a product vector by zero")
        first = tuple(F.mul(c, x) for x in self.factors[0])
        return ProductVector(self.signature, (first,) + self.factors[1:])

    def __neg__(self) -> ProductVector:
        return self.scaled(-1)

    def expand(self) -> DenseTensor:
        return expand_product(self)

    @cached_property
    def entries(self) -> tuple:
        """Row-major entries of the expanded tensor (cached)."""
        F = self.field
        out = [F.one]
        for f in self.factors:
            out = [F.mul(a, b) for a in out for b in f]
        return tuple(out)


@dataclass(frozen=True)
class ProductVectorSet:
    signature: ModeSignature
    vectors: tuple[ProductVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        if not self.vectors:
            raise ShapeMismatch("a product-vector set needs at least one vector")
        for a, x in enumerate(self.vectors):
            if x.signature != self.signature:
                raise ShapeMismatch(f"vector {a} has signature {x.signature.dims} over {x.field}",
                                    location={"vector": a})

    @classmethod
    def of(cls, vectors: Iterable[ProductVector]) -> ProductVectorSet:
        vectors = tuple(vectors)
        if not vectors:
            raise ShapeMismatch("a product-vector set needs at least one vector")
        return cls(vectors[0].signature, vectors)

    @classmethod
    def from_factors(cls, factor_lists: Sequence[Sequence[Sequence]], field: FieldSpec) -> ProductVectorSet:
        return cls.of(ProductVector.of(f, field) for f in factor_lists)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def m(self) -> int:
        return self.signature.m

    @property
    def field(self) -> FieldSpec:
        return self.signature.field

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, a: int) -> ProductVector:
        return self.vectors[a]

    def subset(self, indices: Iterable[int]) -> ProductVectorSet:
        return ProductVectorSet(self.signature, tuple(self.vectors[a] for a in indices))

    def mode_factors(self, j: int) -> list[tuple]:
        return [x.factors[j] for x in self.vectors]


@dataclass(frozen=True)
class DenseTensor:
    signature: ModeSignature
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.signature.size:
            raise ShapeMismatch(f"{len(self.entries)} entries for dims {self.signature.dims}")

    @classmethod
    def zeros(cls, signature: ModeSignature) -> DenseTensor:
        return cls(signature, (signature.field.zero,) * signature.size)

    @classmethod
    def from_entries(cls, dims: Sequence[int], entries: Iterable, field: FieldSpec) -> DenseTensor:
        return cls(ModeSignature(tuple(dims), field), tuple(field(x) for x in entries))

    @property
    def field(self) -> FieldSpec:
        return self.signature.field

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _check(self, other: DenseTensor):
        if self.signature != other.signature:
            if self.field != other.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            raise ShapeMismatch(f"{self.signature.dims} vs {other.signature.dims}")

    def __add__(self, other: DenseTensor) -> DenseTensor:
        self._check(other)
        F = self.field
        return DenseTensor(self.signature, tuple(F.add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: DenseTensor) -> DenseTensor:
        self._check(other)
        F = self.field
        return DenseTensor(self.signature, tuple(F.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> DenseTensor:
        F = self.field
        return DenseTensor(self.signature, tuple(F.neg(a) for a in self.entries))

    def scaled(self, c) -> DenseTensor:
        F = self.field
        c = F(c)
        return DenseTensor(self.signature, tuple(F.mul(c, a) for a in self.entries))

    def __getitem__(self, index: Sequence[int]):
        return self.entries[sum(i * s for i, s in zip(index, self.signature.strides()))]


def expand_product(x: ProductVector) -> DenseTensor:
    entries = x.entries
    if not any(entries):  # unreachable for validated factors
        raise ZeroFactor("product expanded to zero")
    return DenseTensor(x.signature, entries)


def sum_set(s: ProductVectorSet, subset: Iterable[int] | None = None) -> DenseTensor:
    """Exact sum of the vectors indexed by ``subset`` (all of them when None).

    The empty sum is the zero tensor.
    """
    F = s.field
    idx = range(s.n) if subset is None else list(subset)
    acc = [F.zero] * s.signature.size
    for a in idx:
        if not 0 <= a < s.n:
            raise IndexOutOfRange(f"index {a} outside 0..{s.n - 1}", location={"vector": a})
        for k, v in enumerate(s.vectors[a].entries):
            if v:
                acc[k] = F.add(acc[k], v)
    return DenseTensor(s.signature, tuple(acc))


def linear_combination(s: ProductVectorSet, coeffs: Sequence) -> DenseTensor:
    F = s.field
    if len(coeffs) != s.n:
        raise ShapeMismatch(f"{len(coeffs)} coefficients for {s.n} vectors")
    acc = DenseTensor.zeros(s.signature)
    for c, x in zip(coeffs, s.vectors):
        acc = acc + expand_product(x).scaled(F(c))
    return acc


def unfold(t: DenseTensor, j: int) -> Matrix:
    """Mode-``j`` flattening: ``dims[j]`` rows, remaining modes lexicographic."""
    dims = t.signature.dims
    if not 0 <= j < len(dims):
        raise IndexOutOfRange(f"mode {j} outside 0..{len(dims) - 1}")
    outer = prod(dims[:j])
    inner = prod(dims[j + 1:])
    d = dims[j]
    rows = []
    for i in range(d):
        row = []
        for o in range(outer):
            base = (o * d + i) * inner
            row.extend(t.entries[base:base + inner])
        rows.append(row)
    return Matrix(d, outer * inner, tuple(x for r in rows for x in r), t.field)


def flattening_ranks(t: DenseTensor) -> tuple[int, ...]:
    return tuple(matrix_rank(unfold(t, j)) for j in range(t.signature.m))


def is_product_tensor(t: DenseTensor) -> bool:
    """Nonzero with every flattening of rank at most one."""
    return not t.is_zero() and all(r <= 1 for r in flattening_ranks(t))


def factor_product(t: DenseTensor) -> ProductVector:
    """Recover the canonical product vector of a rank-one tensor."""
    if not is_product_tensor(t):
        raise ValueError("tensor is not a product vector")
    F = t.field
    sig = t.signature
    strides = sig.strides()
    pos = next(k for k, v in enumerate(t.entries) if v)
    index = []
    for s in strides:
        index.append(pos // s)
        pos %= s
    pivot = t[index]
    factors = []
    for j, d in enumerate(sig.dims):
        fiber = []
        for i in range(d):
            probe = list(index)
            probe[j] = i
            fiber.append(t[probe])
        factors.append(tuple(fiber))
    # the fibers multiply out to pivot^(m-1) * t
    correction = F.inv(pivot) if sig.m > 1 else F.one
    for _ in range(sig.m - 2):
        correction = F.mul(correction, F.inv(pivot))
    factors[0] = tuple(F.mul(correction, x) for x in factors[0])
    return ProductVector(sig, tuple(factors))


def drop_mode(x: ProductVector, j: int) -> ProductVector:
    """``x`` with factor ``j`` removed, renormalized.

    Dropping mode 0 also drops the scalar that canonical form keeps there, so
    the result is meaningful up to a nonzero multiple in that case.
    """
    if x.m == 1:
        raise LastMode("cannot drop the only mode")
    if not 0 <= j < x.m:
        raise IndexOutOfRange(f"mode {j} outside 0..{x.m - 1}")
    return ProductVector(x.signature.without(j), x.factors[:j] + x.factors[j + 1:])


def span_dims(s: ProductVectorSet) -> tuple[int, ...]:
    return tuple(rank_of_vectors(s.field, s.mode_factors(j)) for j in range(s.m))


def expansion_matrix(s: ProductVectorSet) -> Matrix:
    """Columns are the expanded vectors of ``s``."""
    return Matrix.from_columns([expand_product(x).entries for x in s], s.field)
