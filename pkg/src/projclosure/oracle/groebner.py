from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import ExpansionBudgetExceeded, FieldMismatch, VariableBudgetExceeded
from projclosure.domain.field import FieldSpec, Value
from projclosure.domain.models import BlockVar

log = logging.getLogger(__name__)

Exps = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class LexOrder:
    """Lex order on the block variables x_{i,j}.

    Higher blocks are larger; inside a block x_{i,1} > x_{i,2} > ...
    Exponent vectors are stored by position, position 0 being the largest
    variable, so lex comparison is plain tuple comparison.
    """

    block_sizes: tuple[int, ...]

    @property
    def nvars(self) -> int:
        return sum(self.block_sizes)

    def _offset(self, block: int) -> int:
        return sum(self.block_sizes[block:])

    def position(self, var: BlockVar) -> int:
        if not (1 <= var.block <= len(self.block_sizes)) or not (1 <= var.index <= self.block_sizes[var.block - 1]):
            raise ValueError("VARIABLE_OUT_OF_RANGE")
        return self._offset(var.block) + var.index - 1

    def variable(self, pos: int) -> BlockVar:
        for block in range(len(self.block_sizes), 0, -1):
            start = self._offset(block)
            if pos < start + self.block_sizes[block - 1]:
                return BlockVar(block, pos - start + 1)
        raise ValueError("VARIABLE_OUT_OF_RANGE")

    def exponents(self, powers: Mapping[BlockVar, int]) -> Exps:
        out = [0] * self.nvars
        for v, e in powers.items():
            out[self.position(v)] += e
        return tuple(out)

    def render_monomial(self, exps: Exps) -> str:
        parts: list[str] = []
        for pos, e in sorted(enumerate(exps), key=lambda pe: self.variable(pe[0])):
            if e == 0:
                continue
            name = self.variable(pos).render()
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"


class SparsePoly:
    """Polynomial with exact coefficients; no zero coefficients are stored."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping[Exps, Value] | None = None) -> None:
        self.field = field
        self.nvars = nvars
        self.terms: dict[Exps, Value] = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def variable(cls, field: FieldSpec, order: LexOrder, var: BlockVar) -> SparsePoly:
        return cls(field, order.nvars, {order.exponents({var: 1}): field.one})

    def is_zero(self) -> bool:
        return not self.terms

    def leading_monomial(self) -> Exps:
        return max(self.terms)

    def leading_coeff(self) -> Value:
        return self.terms[self.leading_monomial()]

    def _check(self, other: SparsePoly) -> None:
        if other.field != self.field or other.nvars != self.nvars:
            raise FieldMismatch("polynomials live in different rings")

    def __add__(self, other: SparsePoly) -> SparsePoly:
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = f.add(out[k], v) if k in out else v
        return SparsePoly(f, self.nvars, out)

    def __neg__(self) -> SparsePoly:
        return SparsePoly(self.field, self.nvars, {k: self.field.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        return self + (-other)

    def __mul__(self, other: SparsePoly) -> SparsePoly:
        self._check(other)
        f = self.field
        out: dict[Exps, Value] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                p = f.mul(v1, v2)
                out[k] = f.add(out[k], p) if k in out else p
        return SparsePoly(f, self.nvars, out)

    def scale(self, c: Value) -> SparsePoly:
        return SparsePoly(self.field, self.nvars, {k: self.field.mul(c, v) for k, v in self.terms.items()})

    def monic(self) -> SparsePoly:
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading_coeff()))

    def is_multihomogeneous(self, order: LexOrder) -> bool:
        degrees = {_block_degrees(order, k) for k in self.terms}
        return len(degrees) <= 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"SparsePoly({len(self.terms)} terms)"

    def render(self, order: LexOrder) -> str:
        """Dump form: `coeff*x[i,j]^e*...` terms joined by ' + ', leading term first."""
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.field.render(self.terms[k])
            mono = order.render_monomial(k)
            parts.append(c if mono == "1" else f"{c}*{mono}")
        return " + ".join(parts)


def _block_degrees(order: LexOrder, exps: Exps) -> tuple[int, ...]:
    out = []
    for block in range(1, len(order.block_sizes) + 1):
        start = order._offset(block)
        out.append(sum(exps[start : start + order.block_sizes[block - 1]]))
    return tuple(out)


def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exps, b: Exps) -> Exps:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Exps, b: Exps) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _reduce(
    field: FieldSpec,
    f: dict[Exps, Value],
    basis: Sequence[tuple[Exps, dict[Exps, Value]]],
    max_terms: int,
) -> dict[Exps, Value]:
    """Full normal form of f against monic basis elements given as (leading monomial, terms)."""
    f = dict(f)
    rem: dict[Exps, Value] = {}
    while f:
        lm = max(f)
        c = f[lm]
        for g_lm, g in basis:
            if not _divides(g_lm, lm):
                continue
            shift = tuple(x - y for x, y in zip(lm, g_lm))
            for m, gc in g.items():
                key = tuple(a + b for a, b in zip(m, shift))
                v = field.sub(f[key], field.mul(c, gc)) if key in f else field.neg(field.mul(c, gc))
                if v == 0:
                    f.pop(key, None)
                else:
                    f[key] = v
            break
        else:
            rem[lm] = c
            del f[lm]
        if len(f) + len(rem) > max_terms:
            raise ExpansionBudgetExceeded(f"{len(f) + len(rem)} terms during reduction")
    return rem


def _monic_terms(field: FieldSpec, terms: dict[Exps, Value]) -> dict[Exps, Value]:
    inv = field.inv(terms[max(terms)])
    return {k: field.mul(inv, v) for k, v in terms.items()}


def _s_terms(field: FieldSpec, f: tuple[Exps, dict[Exps, Value]], g: tuple[Exps, dict[Exps, Value]]) -> dict[Exps, Value]:
    lcm = _lcm(f[0], g[0])
    out: dict[Exps, Value] = {}
    for (lm, terms), sign in ((f, 1), (g, -1)):
        shift = tuple(x - y for x, y in zip(lcm, lm))
        for m, c in terms.items():
            key = tuple(a + b for a, b in zip(m, shift))
            c = c if sign > 0 else field.neg(c)
            v = field.add(out[key], c) if key in out else c
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
    return out


def normal_form(f: SparsePoly, basis: Sequence[SparsePoly], budgets: Budgets = DEFAULT_BUDGETS) -> SparsePoly:
    monic = [(g.leading_monomial(), g.monic().terms) for g in basis if not g.is_zero()]
    return SparsePoly(f.field, f.nvars, _reduce(f.field, f.terms, monic, budgets.max_terms))


def s_polynomial(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    fm, gm = f.monic(), g.monic()
    terms = _s_terms(f.field, (fm.leading_monomial(), fm.terms), (gm.leading_monomial(), gm.terms))
    return SparsePoly(f.field, f.nvars, terms)


def buchberger(
    gens: Iterable[SparsePoly], order: LexOrder, budgets: Budgets = DEFAULT_BUDGETS
) -> list[SparsePoly]:
    """Reduced Groebner basis under `order`, sorted by decreasing leading monomial.

    The generators are first reduced against each other, which removes linear
    dependencies among equal-degree inputs. Pairs then leave a heap smallest lcm
    first (degree, then lex); pairs with coprime leading monomials and pairs
    covered by an already treated chain are skipped.
    """
    if order.nvars > budgets.max_variables:
        raise VariableBudgetExceeded(f"{order.nvars} variables > {budgets.max_variables}")
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    field = gens[0].field
    for g in gens:
        if g.field != field or g.nvars != order.nvars:
            raise FieldMismatch("generators live in different rings")

    basis: list[tuple[Exps, dict[Exps, Value]]] = []
    for g in gens:
        h = _reduce(field, g.terms, basis, budgets.max_terms)
        if h:
            h = _monic_terms(field, h)
            basis.append((max(h), h))
    log.debug("buchberger: %d of %d generators survive auto-reduction", len(basis), len(gens))

    heap: list[tuple[int, Exps, int, int]] = []
    pending: set[tuple[int, int]] = set()

    def push(i: int, j: int) -> None:
        lcm = _lcm(basis[i][0], basis[j][0])
        heapq.heappush(heap, (sum(lcm), lcm, i, j))
        pending.add((i, j))

    for j in range(len(basis)):
        for i in range(j):
            push(i, j)

    reductions = 0
    while heap:
        _, lcm, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lm_i, lm_j = basis[i][0], basis[j][0]
        if _coprime(lm_i, lm_j):
            continue
        if any(
            k != i
            and k != j
            and _divides(basis[k][0], lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(basis))
        ):
            continue
        h = _reduce(field, _s_terms(field, basis[i], basis[j]), basis, budgets.max_terms)
        reductions += 1
        if reductions > budgets.max_reductions:
            raise ExpansionBudgetExceeded(f"more than {budgets.max_reductions} S-polynomial reductions")
        if not h:
            continue
        h = _monic_terms(field, h)
        k = len(basis)
        basis.append((max(h), h))
        if len(basis) > budgets.max_basis:
            raise ExpansionBudgetExceeded(f"basis grew past {budgets.max_basis} elements")
        for a in range(k):
            push(a, k)
    log.debug("buchberger: %d reductions, %d elements before inter-reduction", reductions, len(basis))
    return _inter_reduce(field, order, basis, budgets)


def _inter_reduce(
    field: FieldSpec,
    order: LexOrder,
    basis: list[tuple[Exps, dict[Exps, Value]]],
    budgets: Budgets,
) -> list[SparsePoly]:
    minimal: list[tuple[Exps, dict[Exps, Value]]] = []
    for idx, (lm, terms) in enumerate(basis):
        dominated = any(
            _divides(other_lm, lm) and (other_lm != lm or other_idx < idx)
            for other_idx, (other_lm, _) in enumerate(basis)
            if other_idx != idx
        )
        if not dominated:
            minimal.append((lm, terms))
    reduced: list[tuple[Exps, dict[Exps, Value]]] = []
    for idx, (lm, terms) in enumerate(minimal):
        others = [g for k, g in enumerate(minimal) if k != idx]
        tail = {m: c for m, c in terms.items() if m != lm}
        rest = _reduce(field, tail, others, budgets.max_terms)
        rest[lm] = field.one
        reduced.append((lm, rest))
    reduced.sort(key=lambda g: g[0], reverse=True)
    return [SparsePoly(field, order.nvars, terms) for _, terms in reduced]


def leading_monomials(basis: Iterable[SparsePoly]) -> list[Exps]:
    return sorted((g.leading_monomial() for g in basis), reverse=True)
