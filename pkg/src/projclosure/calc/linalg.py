from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from projclosure.domain.errors import AmbientMismatch, FieldMismatch, InvalidCodim, RetryBudgetExhausted
from projclosure.domain.field import FieldSpec, Value

Vector = tuple[Value, ...]


@dataclass(frozen=True, slots=True)
class Matrix:
    field: FieldSpec
    n_cols: int
    rows: tuple[Vector, ...]

    def __post_init__(self) -> None:
        if any(len(r) != self.n_cols for r in self.rows):
            raise ValueError("RAGGED_MATRIX")

    @classmethod
    def from_rows(
        cls, field: FieldSpec, rows: Iterable[Sequence[object]], n_cols: int | None = None
    ) -> Matrix:
        coerced = tuple(tuple(field.coerce(x) for x in r) for r in rows)  # type: ignore[arg-type]
        if n_cols is None:
            if not coerced:
                raise ValueError("EMPTY_MATRIX_NEEDS_WIDTH")
            n_cols = len(coerced[0])
        return cls(field, n_cols, coerced)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Matrix:
        return cls(field, n, tuple(unit_vector(field, n, i) for i in range(n)))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def stack(self, other: Matrix) -> Matrix:
        if other.field != self.field:
            raise FieldMismatch()
        if other.n_cols != self.n_cols:
            raise AmbientMismatch(f"{self.n_cols} vs {other.n_cols}")
        return Matrix(self.field, self.n_cols, self.rows + other.rows)

    def mul(self, other: Matrix) -> Matrix:
        if other.n_rows != self.n_cols:
            raise AmbientMismatch("inner dimensions differ")
        f = self.field
        cols = list(zip(*other.rows)) if other.rows else [()] * other.n_cols
        out = []
        for r in self.rows:
            out.append(tuple(dot(f, r, c) for c in cols))
        return Matrix(f, other.n_cols, tuple(out))

    def apply(self, v: Sequence[Value]) -> Vector:
        if len(v) != self.n_cols:
            raise AmbientMismatch(f"vector length {len(v)} vs {self.n_cols}")
        return tuple(dot(self.field, r, v) for r in self.rows)


def unit_vector(field: FieldSpec, n: int, i: int) -> Vector:
    """e_{i+1} in K^n (0-based position i)."""
    return tuple(field.one if k == i else field.zero for k in range(n))


def dot(field: FieldSpec, a: Sequence[Value], b: Sequence[Value]) -> Value:
    acc = field.zero
    for x, y in zip(a, b):
        if x != 0 and y != 0:
            acc = field.add(acc, field.mul(x, y))
    return acc


def combine(field: FieldSpec, coeffs: Sequence[Value], vectors: Sequence[Sequence[Value]], n: int) -> Vector:
    out = [field.zero] * n
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for k, x in enumerate(v):
            if x != 0:
                out[k] = field.add(out[k], field.mul(c, x))
    return tuple(out)


def _echelon(field: FieldSpec, rows: Iterable[Sequence[Value]], n_cols: int) -> tuple[list[list[Value]], list[int]]:
    """Gauss-Jordan elimination; returns (all rows, reduced) and the pivot columns."""
    work = [list(r) for r in rows]
    pivots: list[int] = []
    lead = 0
    for col in range(n_cols):
        if lead == len(work):
            break
        pr = next((i for i in range(lead, len(work)) if work[i][col] != 0), None)
        if pr is None:
            continue
        work[lead], work[pr] = work[pr], work[lead]
        inv = field.inv(work[lead][col])
        pivot_row = [field.mul(inv, x) for x in work[lead]]
        work[lead] = pivot_row
        for i in range(len(work)):
            if i == lead:
                continue
            factor = work[i][col]
            if factor == 0:
                continue
            work[i] = [a if b == 0 else field.sub(a, field.mul(factor, b)) for a, b in zip(work[i], pivot_row)]
        pivots.append(col)
        lead += 1
    return work, pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    work, pivots = _echelon(m.field, m.rows, m.n_cols)
    return Matrix(m.field, m.n_cols, tuple(tuple(r) for r in work)), len(pivots)


def rank(m: Matrix) -> int:
    return len(_echelon(m.field, m.rows, m.n_cols)[1])


def rank_of_rows(field: FieldSpec, rows: Sequence[Sequence[Value]], n_cols: int) -> int:
    return len(_echelon(field, rows, n_cols)[1])


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of {x : m x = 0}, one vector per free column."""
    f = m.field
    work, pivots = _echelon(f, m.rows, m.n_cols)
    pivot_set = set(pivots)
    out: list[Vector] = []
    for free in range(m.n_cols):
        if free in pivot_set:
            continue
        x = [f.zero] * m.n_cols
        x[free] = f.one
        for row_idx, pc in enumerate(pivots):
            x[pc] = f.neg(work[row_idx][free])
        out.append(tuple(x))
    return out


@dataclass(frozen=True, slots=True)
class Subspace:
    """Subspace of K^{ambient_dim}; basis rows are in reduced row-echelon form."""

    ambient_dim: int
    basis: Matrix
    field: FieldSpec

    @classmethod
    def span(cls, field: FieldSpec, ambient_dim: int, vectors: Iterable[Sequence[object]]) -> Subspace:
        rows = [tuple(field.coerce(x) for x in v) for v in vectors]  # type: ignore[arg-type]
        for r in rows:
            if len(r) != ambient_dim:
                raise AmbientMismatch(f"vector length {len(r)} vs {ambient_dim}")
        work, pivots = _echelon(field, rows, ambient_dim)
        basis = tuple(tuple(r) for r in work[: len(pivots)])
        return cls(ambient_dim, Matrix(field, ambient_dim, basis), field)

    @classmethod
    def zero(cls, field: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, Matrix(field, ambient_dim, ()), field)

    @classmethod
    def whole(cls, field: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, Matrix.identity(field, ambient_dim), field)

    @property
    def dim(self) -> int:
        return self.basis.n_rows

    @property
    def vectors(self) -> tuple[Vector, ...]:
        return self.basis.rows

    def render(self) -> list[list[str]]:
        return [[self.field.render(x) for x in row] for row in self.basis.rows]


def _check_pair(a: Subspace, b: Subspace) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field.label} vs {b.field.label}")
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"{a.ambient_dim} vs {b.ambient_dim}")


def annihilator(s: Subspace) -> Matrix:
    """Rows spanning the linear forms vanishing on s; their common kernel is exactly s."""
    return Matrix(s.field, s.ambient_dim, tuple(kernel_basis(s.basis)))


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    if a == b:
        return a
    constraints = annihilator(a).stack(annihilator(b))
    return Subspace.span(a.field, a.ambient_dim, kernel_basis(constraints))


def intersect_all(subspaces: Sequence[Subspace]) -> Subspace:
    if not subspaces:
        raise ValueError("EMPTY_INTERSECTION_LIST")
    acc = subspaces[0]
    for s in subspaces[1:]:
        acc = subspace_intersection(acc, s)
    return acc


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    return Subspace.span(a.field, a.ambient_dim, a.vectors + b.vectors)


def contains(a: Subspace, v: Sequence[Value]) -> bool:
    if len(v) != a.ambient_dim:
        raise AmbientMismatch(f"vector length {len(v)} vs {a.ambient_dim}")
    return rank_of_rows(a.field, list(a.vectors) + [tuple(v)], a.ambient_dim) == a.dim


def is_subspace(a: Subspace, b: Subspace) -> bool:
    """a <= b."""
    _check_pair(a, b)
    return rank_of_rows(a.field, list(b.vectors) + list(a.vectors), a.ambient_dim) == b.dim


def random_vector(field: FieldSpec, n: int, rng: random.Random, height: int) -> Vector:
    return tuple(field.random_element(rng, height) for _ in range(n))


def random_superspace(
    base: Subspace,
    codim: int,
    rng: random.Random,
    height: int = 1000,
    retries: int = 50,
) -> Subspace:
    """Random U containing base with dim U = ambient_dim - codim."""
    target = base.ambient_dim - codim
    if codim < 0 or target < base.dim:
        raise InvalidCodim(f"codim {codim} with base dim {base.dim} in K^{base.ambient_dim}")
    need = target - base.dim
    if need == 0:
        return base
    for _ in range(retries):
        extra = [random_vector(base.field, base.ambient_dim, rng, height) for _ in range(need)]
        u = Subspace.span(base.field, base.ambient_dim, list(base.vectors) + extra)
        if u.dim == target:
            return u
    raise RetryBudgetExhausted(f"random_superspace after {retries} attempts")


def complement_in(sub: Subspace, ambient: Subspace) -> list[Vector]:
    """Vectors of ambient's basis that extend a basis of sub to a basis of ambient."""
    rows = list(sub.vectors)
    out: list[Vector] = []
    current = len(rows)
    for v in ambient.vectors:
        if rank_of_rows(sub.field, rows + [v], sub.ambient_dim) > current:
            rows.append(v)
            out.append(v)
            current += 1
    if current != ambient.dim:
        raise ValueError("NOT_A_SUBSPACE")
    return out


def random_invertible(field: FieldSpec, k: int, rng: random.Random, height: int, retries: int) -> Matrix:
    for _ in range(retries):
        m = Matrix(field, k, tuple(random_vector(field, k, rng, height) for _ in range(k)))
        if rank(m) == k:
            return m
    raise RetryBudgetExhausted(f"no invertible {k}x{k} matrix after {retries} attempts")
