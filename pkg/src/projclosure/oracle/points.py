from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from projclosure.calc.arrangement import Arrangement, intersection_lattice, rank_table
from projclosure.calc.degrees import dimension_and_support, predicted_section_dims, violating_subsets
from projclosure.calc.linalg import (
    Subspace,
    Vector,
    annihilator,
    combine,
    complement_in,
    contains,
    intersect_all,
    is_subspace,
    random_superspace,
    rank_of_rows,
    subspace_intersection,
)
from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import (
    BudgetExceeded,
    DegenerateScan,
    DegreeMismatch,
    FieldMismatch,
    InfeasibleCodim,
    InvalidCodim,
    InvariantViolation,
    NotInClosure,
    RetryBudgetExhausted,
)
from projclosure.domain.field import FieldSpec, Value
from projclosure.domain.models import DegreeVector, RankTable, indices_of, subset_key

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class TupleW:
    """(W_1, ..., W_n) with V_i inside W_i as a hyperplane."""

    W: tuple[Subspace, ...]

    @classmethod
    def build(cls, a: Arrangement, subspaces: Sequence[Subspace]) -> TupleW:
        if len(subspaces) != a.n:
            raise InvariantViolation(f"{len(subspaces)} subspaces for n={a.n}")
        for i, (v, w) in enumerate(zip(a.subspaces, subspaces), start=1):
            if w.field != a.field or w.ambient_dim != a.ambient_dim:
                raise InvariantViolation(f"W_{i} lives in a different space")
            if w.dim != v.dim + 1 or not is_subspace(v, w):
                raise InvariantViolation(f"W_{i} does not contain V_{i} as a hyperplane")
        return cls(tuple(subspaces))

    @classmethod
    def extend(cls, a: Arrangement, vectors: Sequence[Sequence[object]]) -> TupleW:
        """W_i = span(V_i, w_i)."""
        if len(vectors) != a.n:
            raise InvariantViolation(f"{len(vectors)} vectors for n={a.n}")
        return cls.build(
            a,
            [Subspace.span(a.field, a.ambient_dim, list(v.vectors) + [w]) for v, w in zip(a.subspaces, vectors)],
        )


def _w_lattice(tw: TupleW, budgets: Budgets) -> list[Subspace]:
    first = tw.W[0]
    return intersection_lattice(Arrangement(first.field, first.ambient_dim, tw.W), budgets)


def _rank_criterion(a: Arrangement, tw: TupleW, t: RankTable) -> dict[int, bool]:
    """Per subset I: rank of B_I at the tuple's coordinates is at most r - d_I + |I|.

    q_i = A_i w_i with A_i the natural annihilator of V_i and w_i in W_i outside V_i.
    """
    f = a.field
    As = [annihilator(v) for v in a.subspaces]
    qs = [As[i].apply(complement_in(a.subspaces[i], tw.W[i])[0]) for i in range(a.n)]
    out: dict[int, bool] = {}
    for mask in range(1, 1 << a.n):
        blocks = indices_of(mask)
        width = a.ambient_dim + len(blocks)
        rows: list[Vector] = []
        for k, delta in enumerate(blocks):
            for row, qv in zip(As[delta - 1].rows, qs[delta - 1]):
                tail = [f.zero] * len(blocks)
                tail[k] = qv
                rows.append(tuple(row) + tuple(tail))
        out[mask] = rank_of_rows(f, rows, width) <= a.r - t.values[mask] + len(blocks)
    return out


def in_closure(a: Arrangement, tw: TupleW, budgets: Budgets = DEFAULT_BUDGETS) -> bool:
    """dim of the intersection of W_i over I exceeds d_I for every nonempty I.

    The minor-rank criterion is evaluated alongside and must agree subset by subset.
    """
    TupleW.build(a, tw.W)
    t = rank_table(a, budgets)
    lattice = _w_lattice(tw, budgets)
    by_dim = {mask: lattice[mask].dim > t.values[mask] for mask in range(1, 1 << a.n)}
    by_rank = _rank_criterion(a, tw, t)
    if by_dim != by_rank:
        bad = next(m for m in by_dim if by_dim[m] != by_rank[m])
        raise InvariantViolation(f"membership criteria disagree on I={{{subset_key(bad)}}}")
    return all(by_dim.values())


@dataclass(frozen=True, slots=True)
class WitnessCurve:
    """v_t = sum_l t^l w_l; the tuple (span(V_i, v_t)) tends to W as t -> 0."""

    field: FieldSpec
    w: tuple[Vector, ...]
    stage_sets: tuple[tuple[int, ...], ...]
    # assignment[i-1] = stage j with i in I_j but not in I_{j+1}
    assignment: tuple[int, ...]

    def point(self, t: Value) -> Vector:
        f = self.field
        coeffs = [f.one]
        for _ in range(1, len(self.w)):
            coeffs.append(f.mul(coeffs[-1], t))
        return combine(f, coeffs, self.w, len(self.w[0]))

    def tail(self, stage: int, t: Value) -> Vector:
        """sum over l >= stage of t^(l - stage) w_l."""
        f = self.field
        coeffs = [f.one]
        for _ in range(stage + 1, len(self.w)):
            coeffs.append(f.mul(coeffs[-1], t))
        return combine(f, coeffs, self.w[stage:], len(self.w[0]))


def _scan_outside(x: Subspace, y: Subspace) -> Vector:
    """First basis vector of x not in y, then pairwise small combinations."""
    for v in x.vectors:
        if not contains(y, v):
            return v
    f = x.field
    for u, v in itertools.combinations(x.vectors, 2):
        for c in (1, 2, -1):
            cand = combine(f, [f.one, f.coerce(c)], [u, v], x.ambient_dim)
            if not contains(y, cand):
                return cand
    raise DegenerateScan(f"no vector of a {x.dim}-dimensional intersection escapes the {y.dim}-dimensional one")


def _random_nonzero(f: FieldSpec, rng: random.Random, height: int) -> Value:
    while True:
        t = f.random_element(rng, height)
        if t != 0:
            return t


def witness_curve(
    a: Arrangement,
    tw: TupleW,
    rng: random.Random | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> WitnessCurve:
    """Greedy stage chain: w_j in the intersection of W_i over I_j, outside that of V_i."""
    if not in_closure(a, tw, budgets):
        raise NotInClosure()
    current = tuple(range(1, a.n + 1))
    stages: list[tuple[int, ...]] = []
    ws: list[Vector] = []
    assignment = [0] * a.n
    while current:
        x = intersect_all([tw.W[i - 1] for i in current])
        y = intersect_all([a.subspace(i) for i in current])
        w = _scan_outside(x, y)
        nxt = tuple(i for i in current if contains(a.subspace(i), w))
        for i in current:
            if i not in nxt:
                assignment[i - 1] = len(ws)
        stages.append(current)
        ws.append(w)
        current = nxt
    curve = WitnessCurve(a.field, tuple(ws), tuple(stages), tuple(assignment))
    _check_curve(a, tw, curve, rng or random.Random(0), budgets)
    return curve


def _check_curve(a: Arrangement, tw: TupleW, curve: WitnessCurve, rng: random.Random, budgets: Budgets) -> None:
    f = a.field
    zero = f.zero
    for i, j in enumerate(curve.assignment, start=1):
        v = a.subspace(i)
        limit = Subspace.span(f, a.ambient_dim, list(v.vectors) + [curve.tail(j, zero)])
        if limit != tw.W[i - 1]:
            raise InvariantViolation(f"curve limit differs from W_{i}")
    checked = 0
    for _ in range(budgets.curve_samples * budgets.retry_budget):
        if checked == budgets.curve_samples:
            return
        t = _random_nonzero(f, rng, budgets.random_height)
        vt = curve.point(t)
        if any(contains(v, vt) for v in a.subspaces):
            continue
        for i, j in enumerate(curve.assignment, start=1):
            v = a.subspace(i)
            whole = Subspace.span(f, a.ambient_dim, list(v.vectors) + [vt])
            staged = Subspace.span(f, a.ambient_dim, list(v.vectors) + [curve.tail(j, t)])
            if whole != staged:
                raise InvariantViolation(f"curve point at t={f.render(t)} disagrees on block {i}")
        checked += 1
    if checked < budgets.curve_samples:
        raise RetryBudgetExhausted(f"only {checked} usable curve parameters")


def _check_codims(t: RankTable, c: DegreeVector) -> None:
    if len(c) != t.n or any(x < 0 for x in c):
        raise InvalidCodim(f"{c}")
    for i, ci in enumerate(c, start=1):
        if ci > t.r - t.single(i):
            raise InfeasibleCodim(f"c_{i}={ci} > r-d_{i}={t.r - t.single(i)}")


@dataclass(frozen=True, slots=True)
class SectionSample:
    sections: tuple[Subspace, ...]
    retries: int
    # achieved dim of the intersection of V^i over each subset, keyed "1,3"
    dims: dict[str, int]


def sample_sections(
    a: Arrangement, c: DegreeVector, rng: random.Random, budgets: Budgets = DEFAULT_BUDGETS
) -> SectionSample:
    t = rank_table(a, budgets)
    _check_codims(t, c)
    by_subset, by_block = predicted_section_dims(t, c)
    for attempt in range(1, budgets.retry_budget + 1):
        sections = [
            random_superspace(v, ci, rng, budgets.random_height, budgets.retry_budget)
            for v, ci in zip(a.subspaces, c)
        ]
        lattice = intersection_lattice(Arrangement(a.field, a.ambient_dim, tuple(sections)), budgets)
        if any(lattice[mask].dim != want for mask, want in by_subset.items()):
            continue
        common = lattice[(1 << a.n) - 1]
        if any(subspace_intersection(common, a.subspace(k)).dim != want for k, want in by_block.items()):
            continue
        if attempt > 1:
            log.info("sections for c=%s accepted after %d samples", c, attempt)
        return SectionSample(
            tuple(sections), attempt - 1, {subset_key(m): lattice[m].dim for m in range(1, 1 << a.n)}
        )
    raise RetryBudgetExhausted(f"no generic sections for c={c} in {budgets.retry_budget} samples")


def generic_sections(
    a: Arrangement, c: DegreeVector, rng: random.Random, budgets: Budgets = DEFAULT_BUDGETS
) -> list[Subspace]:
    """V^i containing V_i with codim c_i, meeting the predicted intersection dimensions."""
    return list(sample_sections(a, c, rng, budgets).sections)


def projective_points(f: FieldSpec, k: int) -> Iterator[tuple[int, ...]]:
    """Coordinates of the points of P^{k-1}(F_q), first nonzero entry 1."""
    q = f.q
    assert q is not None
    for lead in range(k):
        for rest in itertools.product(range(q), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + rest


def projective_size(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


@dataclass(frozen=True, slots=True)
class SectionCount:
    c: DegreeVector
    count: int
    in_support: bool
    certified: bool
    retries: int
    section_dims: dict[str, int]
    q: int

    @property
    def expected(self) -> int:
        return 1 if self.in_support else 0


def count_intersection_points(
    a: Arrangement, c: DegreeVector, rng: random.Random, budgets: Budgets = DEFAULT_BUDGETS
) -> SectionCount:
    """Number of F_q points of X on a generic product of sections of codims c.

    For c outside M(p) the count is certified only when the sampled sections meet
    the intersection of V_i over some violating I exactly; otherwise certified is False.
    """
    f = a.field
    if f.is_rational:
        raise FieldMismatch("point counts run over a prime field")
    q = f.q
    assert q is not None
    t = rank_table(a, budgets)
    _check_codims(t, c)
    support = dimension_and_support(t)
    if sum(c) != support.p:
        raise DegreeMismatch(f"sum(c)={sum(c)} != p={support.p}")
    sizes = [t.r - t.single(i) - ci + 1 for i, ci in enumerate(c, start=1)]
    total = math.prod(projective_size(q, k) for k in sizes)
    if total > budgets.point_budget:
        raise BudgetExceeded(f"{total} tuples for c={c} over F_{q}")

    sample = sample_sections(a, c, rng, budgets)
    in_support = tuple(c) in support.support
    certified = in_support
    if not in_support:
        certified = any(
            sample.dims[subset_key(m)] == t.values[m] for m in violating_subsets(t, c)
        )

    n = a.n
    comps = [complement_in(v, s) for v, s in zip(a.subspaces, sample.sections)]
    whole = Subspace.whole(f, a.ambient_dim)
    inter: list[Subspace] = [whole] * (1 << n)
    chosen: list[Subspace] = []
    count = 0

    def rec(k: int) -> None:
        nonlocal count
        if k == n:
            tw = TupleW(tuple(chosen))
            if in_closure(a, tw, budgets):
                count += 1
            return
        v = a.subspaces[k]
        bit = 1 << k
        for coords in projective_points(f, len(comps[k])):
            w = combine(f, coords, comps[k], a.ambient_dim)
            wk = Subspace.span(f, a.ambient_dim, list(v.vectors) + [w])
            ok = True
            for rest in range(bit):
                mask = rest | bit
                inter[mask] = wk if rest == 0 else subspace_intersection(inter[rest], wk)
                if inter[mask].dim <= t.values[mask]:
                    ok = False
                    break
            if not ok:
                continue
            chosen.append(wk)
            rec(k + 1)
            chosen.pop()

    rec(0)
    return SectionCount(
        c=tuple(c),
        count=count,
        in_support=in_support,
        certified=certified,
        retries=sample.retries,
        section_dims=sample.dims,
        q=q,
    )
