from __future__ import annotations

import itertools
import math
from collections import defaultdict
from typing import Iterable, Iterator

from projclosure.calc.degrees import dimension_and_support, subset_sums
from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import BudgetExceeded, InfeasibleVector, InvariantViolation
from projclosure.domain.models import (
    BlockMonomial,
    BlockMonomialIdeal,
    BlockVar,
    DegreeVector,
    RankTable,
    indices_of,
)

# A squarefree monomial as its set of variables; general (several variables per block allowed).
SquarefreeMonomial = frozenset[BlockVar]


def prime_component(t: RankTable, m: DegreeVector) -> frozenset[BlockVar]:
    """Generators of P_(m): the first r-d_i-m_i variables of each block."""
    if len(m) != t.n or any(x < 0 for x in m):
        raise InfeasibleVector(f"{m}")
    out: set[BlockVar] = set()
    for i in range(1, t.n + 1):
        k = t.r - t.single(i) - m[i - 1]
        if k < 0:
            raise InfeasibleVector(f"m_{i}={m[i - 1]} exceeds r-d_{i}={t.r - t.single(i)}")
        out.update(BlockVar(i, j) for j in range(1, k + 1))
    return frozenset(out)


def _proper_submasks(mask: int) -> Iterator[int]:
    sub = (mask - 1) & mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def initial_ideal(t: RankTable) -> BlockMonomialIdeal:
    """Irredundant generators of I_o, support by support in increasing size.

    For support I and c_i = r+1-d_i-ell_i, the generator condition is
    sum_I c_i >= r+1-d_I, and sum_J c_i < r+1-d_J for every proper nonempty J.
    """
    sizes = t.block_sizes()
    rp1 = t.r_plus_1
    gens: set[BlockMonomial] = set()
    masks = sorted(range(1, 1 << t.n), key=lambda m: (bin(m).count("1"), m))
    for mask in masks:
        idx = [i - 1 for i in indices_of(mask)]
        need = rp1 - t.values[mask]
        local_to_global = [0] * (1 << len(idx))
        for local in range(1, len(local_to_global)):
            local_to_global[local] = sum(1 << idx[b] for b in range(len(idx)) if local >> b & 1)
        for ell in itertools.product(*(range(1, sizes[i] + 1) for i in idx)):
            c = tuple(sizes[i] - e for i, e in zip(idx, ell))
            sums = subset_sums(c)
            full_local = len(sums) - 1
            if sums[full_local] < need:
                continue
            if any(sums[sub] >= rp1 - t.values[local_to_global[sub]] for sub in _proper_submasks(full_local)):
                continue
            full = [0] * t.n
            for i, e in zip(idx, ell):
                full[i] = e
            gens.add(BlockMonomial(tuple(full)))
    return BlockMonomialIdeal(sizes, frozenset(gens))


def minimalize(gens: Iterable[SquarefreeMonomial]) -> frozenset[SquarefreeMonomial]:
    """Drop every generator divisible by another."""
    kept: list[SquarefreeMonomial] = []
    for g in sorted(set(gens), key=lambda s: (len(s), sorted(s))):
        if not any(h <= g for h in kept):
            kept.append(g)
    return frozenset(kept)


def intersect_ideals(
    a: Iterable[SquarefreeMonomial], b: Iterable[SquarefreeMonomial]
) -> frozenset[SquarefreeMonomial]:
    """Squarefree ideal intersection by pairwise lcm.

    Against a degree-one ideal this is the set {ab : a not divisible by b} with {a : b | a}.
    """
    b = list(b)
    return minimalize(x | y for x in a for y in b)


def add_ideals(a: Iterable[SquarefreeMonomial], b: Iterable[SquarefreeMonomial]) -> frozenset[SquarefreeMonomial]:
    return minimalize(itertools.chain(a, b))


def to_block_ideal(gens: Iterable[SquarefreeMonomial], sizes: tuple[int, ...]) -> BlockMonomialIdeal:
    out: set[BlockMonomial] = set()
    for g in gens:
        ell = [0] * len(sizes)
        for v in g:
            if ell[v.block - 1]:
                raise InvariantViolation(f"generator {sorted(g)} has two variables in block {v.block}")
            ell[v.block - 1] = v.index
        out.add(BlockMonomial(tuple(ell)))
    return BlockMonomialIdeal(sizes, frozenset(out))


def initial_ideal_via_intersection(t: RankTable, budgets: Budgets = DEFAULT_BUDGETS) -> BlockMonomialIdeal:
    support = dimension_and_support(t).sorted_support()
    if len(support) > budgets.support_budget:
        raise BudgetExceeded(f"|M(p)|={len(support)} > {budgets.support_budget}")
    current: frozenset[SquarefreeMonomial] | None = None
    for m in support:
        component = frozenset(frozenset([v]) for v in prime_component(t, m))
        current = component if current is None else intersect_ideals(current, component)
        if len(current) > budgets.max_terms:
            raise BudgetExceeded(f"{len(current)} intermediate generators")
    return to_block_ideal(current or frozenset(), t.block_sizes())


def is_member(mono: BlockMonomial, ideal: BlockMonomialIdeal) -> bool:
    if len(mono.ell) != len(ideal.block_sizes):
        raise ValueError("BLOCK_COUNT_MISMATCH")
    return any(g.divides(mono) for g in ideal.gens)


def satisfies_generator_condition(t: RankTable, mono: BlockMonomial) -> bool:
    """Some nonempty J inside the support has r+1 - sum_J (r+1-d_i-ell_i) <= d_J."""
    sizes = t.block_sizes()
    supp = mono.support
    for k in range(1, len(supp) + 1):
        for sub in itertools.combinations(supp, k):
            mask = sum(1 << (i - 1) for i in sub)
            if t.r_plus_1 - sum(sizes[i - 1] - mono.ell[i - 1] for i in sub) <= t.values[mask]:
                return True
    return False


def all_block_monomials(sizes: tuple[int, ...]) -> Iterator[BlockMonomial]:
    for ell in itertools.product(*(range(0, s + 1) for s in sizes)):
        yield BlockMonomial(tuple(ell))


def max_generator_length(ideal: BlockMonomialIdeal) -> int:
    return max((g.length for g in ideal.gens), default=0)


def _monomials_with_support(u: int, k: int) -> int:
    """Degree-u monomials in k given variables, each appearing."""
    if k == 0:
        return 1 if u == 0 else 0
    return math.comb(u - 1, k - 1) if u >= k else 0


def _presence_counts(size: int, u: int, tracked: list[int]) -> dict[int, int]:
    """Degree-u monomials in one block, grouped by which tracked variables appear (bitmask)."""
    a = len(tracked)
    b = size - a
    by_count = [
        sum(math.comb(b, k) * _monomials_with_support(u, alpha + k) for k in range(b + 1)) for alpha in range(a + 1)
    ]
    return {mask: by_count[bin(mask).count("1")] for mask in range(1 << a) if by_count[bin(mask).count("1")]}


def block_monomial_total(sizes: tuple[int, ...], u: DegreeVector) -> int:
    return math.prod(math.comb(ui + s - 1, s - 1) for ui, s in zip(u, sizes))


def count_standard(
    gens: Iterable[SquarefreeMonomial],
    sizes: tuple[int, ...],
    u: DegreeVector,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> int:
    """Monomials of multidegree u in the block ring divisible by no generator.

    Blocks are scanned in turn; each monomial of a block is classified by which
    generator variables it contains, and the state is the set of generators still
    dividing the partial monomial.
    """
    if len(u) != len(sizes) or any(x < 0 for x in u):
        raise ValueError("BAD_DEGREE_VECTOR")
    total = block_monomial_total(sizes, u)
    if total > budgets.standard_monomial_budget:
        raise BudgetExceeded(f"{total} monomials of degree {u}")
    gens = list(gens)
    alive_all = (1 << len(gens)) - 1
    dp: dict[int, int] = {alive_all: 1}
    for block, (size, ui) in enumerate(zip(sizes, u), start=1):
        tracked = sorted({v.index for g in gens for v in g if v.block == block})
        pos = {j: k for k, j in enumerate(tracked)}
        need = [sum(1 << pos[v.index] for v in g if v.block == block) for g in gens]
        presence = _presence_counts(size, ui, tracked)
        kills = {p: sum(1 << gi for gi, req in enumerate(need) if req & ~p) for p in presence}
        nxt: dict[int, int] = defaultdict(int)
        for state, ways in dp.items():
            for present, cnt in presence.items():
                nxt[state & ~kills[present]] += ways * cnt
        dp = nxt
    return dp.get(0, 0)


def standard_monomial_count(
    ideal: BlockMonomialIdeal, t: RankTable, u: DegreeVector, budgets: Budgets = DEFAULT_BUDGETS
) -> int:
    sizes = t.block_sizes()
    if tuple(ideal.block_sizes) != sizes:
        raise ValueError("BLOCK_COUNT_MISMATCH")
    return count_standard((g.variables() for g in ideal.gens), sizes, u, budgets)
