from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from projclosure.calc.arrangement import Arrangement, rank_table
from projclosure.calc.degrees import subset_sums
from projclosure.calc.linalg import Matrix, annihilator, random_invertible
from projclosure.calc.monomial import initial_ideal
from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import BudgetExceeded, FieldMismatch, GenericityNotAchieved, VariableBudgetExceeded
from projclosure.domain.field import FieldSpec, Value
from projclosure.domain.models import BlockVar, RankTable, indices_of
from projclosure.oracle.groebner import Exps, LexOrder, SparsePoly, buchberger

log = logging.getLogger(__name__)

Entry = Union[Value, BlockVar]


def natural_projection_matrices(a: Arrangement) -> list[Matrix]:
    """A_i with rows a basis of the forms vanishing on V_i, in echelon coordinates."""
    return [annihilator(s) for s in a.subspaces]


def projection_matrices(a: Arrangement, rng: random.Random, budgets: Budgets = DEFAULT_BUDGETS) -> list[Matrix]:
    """A_i = G_i * N_i with N_i natural and G_i random invertible; kernel of A_i is V_i."""
    out: list[Matrix] = []
    for base in natural_projection_matrices(a):
        g = random_invertible(a.field, base.n_rows, rng, budgets.random_height, budgets.retry_budget)
        out.append(g.mul(base))
    return out


@dataclass(frozen=True, slots=True)
class GenericityReport:
    passed: bool
    exhaustive: bool
    subsets_checked: int
    # (block, row) pairs, 1-based, of a dependent row set that satisfies the hypothesis.
    witness: tuple[tuple[int, int], ...] | None = None

    def __bool__(self) -> bool:
        return self.passed


class _RowSet:
    """Incremental echelon basis; rows inserted after elimination against earlier ones."""

    def __init__(self, f: FieldSpec) -> None:
        self.f = f
        self.rows: list[tuple[int, list[Value]]] = []

    def residue(self, v: Sequence[Value]) -> list[Value] | None:
        f = self.f
        w = list(v)
        for pc, row in self.rows:
            c = w[pc]
            if c != 0:
                w = [x if y == 0 else f.sub(x, f.mul(c, y)) for x, y in zip(w, row)]
        pc = next((k for k, x in enumerate(w) if x != 0), None)
        if pc is None:
            return None
        inv = f.inv(w[pc])
        self.rows.append((pc, [f.mul(inv, x) for x in w]))
        return w

    def pop(self) -> None:
        self.rows.pop()


def genericity_check(
    As: Sequence[Matrix],
    t: RankTable,
    budget: int = 200,
    rng: random.Random | None = None,
    exhaustive_rows: int = 16,
) -> GenericityReport:
    """Row sets C whose per-block counts a satisfy sum_{I'} a_m <= r+1-d_{I'} must be independent.

    Exhaustive over all such sets for at most `exhaustive_rows` rows; otherwise all
    sets of size <= 3 plus `budget` random maximal sets.
    """
    f = As[0].field
    rows = [(b, tuple(v)) for b, m in enumerate(As) for v in m.rows]
    labels = [(b + 1, k + 1) for b, m in enumerate(As) for k in range(m.n_rows)]
    cap = [t.r_plus_1 - d for d in t.values]
    n = t.n
    counts = [0] * n

    def admissible(block: int) -> bool:
        sums = subset_sums(tuple(counts))
        bit = 1 << block
        return all(sums[mask] <= cap[mask] for mask in range(1, 1 << n) if mask & bit)

    checked = 0

    if len(rows) <= exhaustive_rows:
        chosen: list[int] = []
        basis = _RowSet(f)

        def dfs(start: int) -> tuple[tuple[int, int], ...] | None:
            nonlocal checked
            for idx in range(start, len(rows)):
                b, v = rows[idx]
                counts[b] += 1
                if admissible(b):
                    checked += 1
                    if basis.residue(v) is None:
                        counts[b] -= 1
                        return tuple(labels[k] for k in chosen + [idx])
                    chosen.append(idx)
                    found = dfs(idx + 1)
                    chosen.pop()
                    basis.pop()
                    if found is not None:
                        counts[b] -= 1
                        return found
                counts[b] -= 1
            return None

        witness = dfs(0)
        return GenericityReport(witness is None, True, checked, witness)

    rng = rng or random.Random(0)
    for size in (1, 2, 3):
        for combo in itertools.combinations(range(len(rows)), size):
            for k in range(n):
                counts[k] = 0
            ok = True
            for idx in combo:
                counts[rows[idx][0]] += 1
                if not admissible(rows[idx][0]):
                    ok = False
                    break
            if not ok:
                continue
            checked += 1
            rs = _RowSet(f)
            if any(rs.residue(rows[idx][1]) is None for idx in combo):
                return GenericityReport(False, False, checked, tuple(labels[i] for i in combo))
    for _ in range(budget):
        for k in range(n):
            counts[k] = 0
        order = list(range(len(rows)))
        rng.shuffle(order)
        rs = _RowSet(f)
        picked: list[int] = []
        for idx in order:
            b = rows[idx][0]
            counts[b] += 1
            if not admissible(b):
                counts[b] -= 1
                continue
            picked.append(idx)
            if rs.residue(rows[idx][1]) is None:
                return GenericityReport(False, False, checked + 1, tuple(labels[i] for i in sorted(picked)))
        checked += 1
    log.info("genericity check sampled over %d row sets (probabilistic)", checked)
    return GenericityReport(True, False, checked, None)


@dataclass(frozen=True, slots=True)
class SymbolicMatrix:
    """Entries are field constants or single block variables."""

    n_rows: int
    n_cols: int
    entries: tuple[tuple[Entry, ...], ...]


def build_B(As: Sequence[Matrix], subset: Sequence[int], t: RankTable) -> SymbolicMatrix:
    """[A_delta | q_delta] blocks for delta in subset (1-based), q_delta = (x_{delta,1}, ...)^T."""
    blocks = sorted(subset)
    if not blocks:
        raise ValueError("EMPTY_SUBSET")
    f = As[0].field
    width = t.r_plus_1 + len(blocks)
    out: list[tuple[Entry, ...]] = []
    for k, delta in enumerate(blocks):
        a_delta = As[delta - 1]
        for j, row in enumerate(a_delta.rows, start=1):
            tail: list[Entry] = [f.zero] * len(blocks)
            tail[k] = BlockVar(delta, j)
            out.append(tuple(row) + tuple(tail))
    return SymbolicMatrix(len(out), width, tuple(out))


def _is_zero_entry(e: Entry) -> bool:
    return not isinstance(e, BlockVar) and e == 0


def _minors(
    b: SymbolicMatrix, size: int, f: FieldSpec, order: LexOrder, budget: int
) -> list[dict[Exps, Value]]:
    """All size x size minors, expanding along columns with sub-determinants memoized on row sets."""
    nv = order.nvars
    zero_exps = (0,) * nv
    out: list[dict[Exps, Value]] = []
    row_sets = list(itertools.combinations(range(b.n_rows), size))
    col_sets = list(itertools.combinations(range(b.n_cols), size))
    if len(row_sets) * len(col_sets) > budget:
        raise BudgetExceeded(f"{len(row_sets) * len(col_sets)} minors of size {size}")
    for cols in col_sets:
        column_entries = [
            [(r, b.entries[r][c]) for r in range(b.n_rows) if not _is_zero_entry(b.entries[r][c])]
            for c in cols
        ]
        memo: dict[int, dict[Exps, Value]] = {0: {zero_exps: f.one}}

        def det(rowmask: int) -> dict[Exps, Value]:
            if rowmask in memo:
                return memo[rowmask]
            depth = size - bin(rowmask).count("1")
            acc: dict[Exps, Value] = {}
            for r, entry in column_entries[depth]:
                if not rowmask >> r & 1:
                    continue
                sub = det(rowmask & ~(1 << r))
                if not sub:
                    continue
                negate = bin(rowmask & ((1 << r) - 1)).count("1") % 2 == 1
                if isinstance(entry, BlockVar):
                    pos = order.position(entry)
                    for k, v in sub.items():
                        key = k[:pos] + (k[pos] + 1,) + k[pos + 1 :]
                        term = f.neg(v) if negate else v
                        acc[key] = f.add(acc[key], term) if key in acc else term
                else:
                    scale = f.neg(entry) if negate else entry
                    for k, v in sub.items():
                        term = f.mul(scale, v)
                        acc[k] = f.add(acc[k], term) if k in acc else term
            acc = {k: v for k, v in acc.items() if v != 0}
            memo[rowmask] = acc
            return acc

        for rows in row_sets:
            mask = sum(1 << r for r in rows)
            poly = det(mask)
            if poly:
                out.append(poly)
    return out


def minor_ideal(
    a: Arrangement,
    As: Sequence[Matrix],
    t: RankTable | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> list[SparsePoly]:
    """Nonzero (r+1-d_I+|I|)-minors of B_I over every nonempty I, duplicates removed."""
    t = t or rank_table(a, budgets)
    order = LexOrder(t.block_sizes())
    f = a.field
    seen: set[frozenset] = set()
    out: list[SparsePoly] = []
    total = 0
    for mask in range(1, 1 << t.n):
        subset = indices_of(mask)
        size = t.r_plus_1 - t.values[mask] + len(subset)
        b = build_B(As, subset, t)
        if size > min(b.n_rows, b.n_cols):
            continue
        for terms in _minors(b, size, f, order, budgets.max_minors - total):
            total += 1
            key = frozenset(terms.items())
            if key in seen:
                continue
            seen.add(key)
            out.append(SparsePoly(f, order.nvars, terms))
    return out


@dataclass(frozen=True, slots=True)
class InitialIdealVerdict:
    equal: bool
    leading: tuple[str, ...]
    expected: tuple[str, ...]
    attempts: int
    exhaustive_genericity: bool
    minor_count: int
    basis: tuple[SparsePoly, ...] = field(default=(), compare=False)
    minors: tuple[SparsePoly, ...] = field(default=(), compare=False)

    def __bool__(self) -> bool:
        return self.equal


def verify_initial(a: Arrangement, rng: random.Random, budgets: Budgets = DEFAULT_BUDGETS) -> InitialIdealVerdict:
    """Compare the lex initial ideal of the minor ideal with I_o after generic re-coordinatization."""
    if not a.field.is_rational:
        raise FieldMismatch("the Groebner oracle runs over the rationals")
    t = rank_table(a, budgets)
    order = LexOrder(t.block_sizes())
    if order.nvars > budgets.max_variables:
        raise VariableBudgetExceeded(f"{order.nvars} variables > {budgets.max_variables}")

    report: GenericityReport | None = None
    As: list[Matrix] = []
    attempts = 0
    for attempts in range(1, budgets.retry_budget + 1):
        As = projection_matrices(a, rng, budgets)
        report = genericity_check(As, t, budgets.genericity_samples, rng, budgets.genericity_exhaustive_rows)
        if report:
            break
        log.info("genericity attempt %d failed on rows %s", attempts, report.witness)
    else:
        raise GenericityNotAchieved(f"after {budgets.retry_budget} re-coordinatizations")
    assert report is not None

    minors = minor_ideal(a, As, t, budgets)
    basis = buchberger(minors, order, budgets)
    leading = sorted({order.render_monomial(g.leading_monomial()) for g in basis})
    expected_ideal = initial_ideal(t)
    expected = sorted(
        order.render_monomial(order.exponents({v: 1 for v in g.variables()})) for g in expected_ideal.gens
    )
    return InitialIdealVerdict(
        equal=leading == expected,
        leading=tuple(leading),
        expected=tuple(expected),
        attempts=attempts,
        exhaustive_genericity=report.exhaustive,
        minor_count=len(minors),
        basis=tuple(basis),
        minors=tuple(minors),
    )
