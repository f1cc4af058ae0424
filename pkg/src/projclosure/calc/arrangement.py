from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from projclosure.calc.linalg import Subspace, subspace_intersection
from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import DivisionByZero, FieldMismatch, SubsetBudgetExceeded
from projclosure.domain.field import FieldSpec, next_prime
from projclosure.domain.models import RankTable

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Arrangement:
    """Subspaces V_1..V_n of V = K^{ambient_dim}, in the order given."""

    field: FieldSpec
    ambient_dim: int
    subspaces: tuple[Subspace, ...]

    @property
    def n(self) -> int:
        return len(self.subspaces)

    @property
    def r(self) -> int:
        return self.ambient_dim - 1

    @classmethod
    def from_bases(
        cls, field: FieldSpec, ambient_dim: int, bases: Sequence[Sequence[Sequence[object]]]
    ) -> Arrangement:
        subs = tuple(Subspace.span(field, ambient_dim, rows) for rows in bases)
        return cls(field, ambient_dim, subs)

    def subspace(self, i: int) -> Subspace:
        """V_i, 1-based."""
        return self.subspaces[i - 1]


def intersection_lattice(a: Arrangement, budgets: Budgets = DEFAULT_BUDGETS) -> list[Subspace]:
    """V_I for every subset bitmask I; entry 0 is V itself."""
    if a.n > budgets.max_subsets_n:
        raise SubsetBudgetExceeded(f"n={a.n} > {budgets.max_subsets_n}")
    memo: list[Subspace] = [Subspace.whole(a.field, a.ambient_dim)] * (1 << a.n)
    for mask in range(1, 1 << a.n):
        low = mask & -mask
        rest = mask ^ low
        v = a.subspaces[low.bit_length() - 1]
        memo[mask] = v if rest == 0 else subspace_intersection(memo[rest], v)
    return memo


def rank_table(a: Arrangement, budgets: Budgets = DEFAULT_BUDGETS) -> RankTable:
    lattice = intersection_lattice(a, budgets)
    values = (a.ambient_dim,) + tuple(s.dim for s in lattice[1:])
    return RankTable(n=a.n, r_plus_1=a.ambient_dim, values=values, abstract=False)


def reduce_to_prime(a: Arrangement, q: int, budgets: Budgets = DEFAULT_BUDGETS) -> Arrangement | None:
    """The same arrangement read over F_q, or None when q is a bad prime for it.

    q is bad when a denominator vanishes mod q or any intersection dimension changes.
    """
    if not a.field.is_rational:
        raise FieldMismatch("reduction starts from a rational arrangement")
    fq = FieldSpec.prime(q)
    try:
        reduced = Arrangement.from_bases(fq, a.ambient_dim, [s.vectors for s in a.subspaces])
    except DivisionByZero:
        return None
    if rank_table(reduced, budgets).values != rank_table(a, budgets).values:
        return None
    return reduced


def good_prime_reduction(
    a: Arrangement, q: int, budgets: Budgets = DEFAULT_BUDGETS, attempts: int = 25
) -> tuple[Arrangement, int]:
    """Reduce mod q, moving to the next prime until the reduction is good."""
    for _ in range(attempts):
        reduced = reduce_to_prime(a, q, budgets)
        if reduced is not None:
            return reduced, q
        log.info("bad reduction at q=%d, trying the next prime", q)
        q = next_prime(q)
    raise ValueError("NO_GOOD_PRIME")
