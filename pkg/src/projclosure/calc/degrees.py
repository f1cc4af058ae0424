from __future__ import annotations

import itertools
import logging

from projclosure.domain.errors import EmptySupport
from projclosure.domain.models import DegreeVector, MultidegreeSupport, RankTable

log = logging.getLogger(__name__)


def block_bounds(t: RankTable) -> list[int]:
    """Per-block cap r - d_i on feasible degree entries."""
    return [t.r - t.single(i) for i in range(1, t.n + 1)]


def subset_sums(vec: DegreeVector) -> list[int]:
    """sum of vec over I, for every subset bitmask I."""
    sums = [0] * (1 << len(vec))
    for mask in range(1, len(sums)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + vec[low.bit_length() - 1]
    return sums


def is_feasible(t: RankTable, m: DegreeVector) -> bool:
    """r+1 - sum_I m_i > d_I for every nonempty I."""
    if len(m) != t.n or any(x < 0 for x in m):
        return False
    sums = subset_sums(m)
    return all(t.r_plus_1 - sums[mask] > t.values[mask] for mask in range(1, 1 << t.n))


def enumerate_M(t: RankTable, h: int) -> frozenset[DegreeVector]:
    """Feasible vectors of total degree h.

    Depth-first over coordinates; at coordinate k only the subsets whose largest
    index is k are new, and their partial sums extend those of the prefix.
    """
    n, rp1 = t.n, t.r_plus_1
    ub = block_bounds(t)
    tail = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        tail[k] = tail[k + 1] + max(ub[k], 0)

    sums = [0] * (1 << n)
    m = [0] * n
    out: list[DegreeVector] = []

    def rec(k: int, remaining: int) -> None:
        if k == n:
            if remaining == 0:
                out.append(tuple(m))
            return
        if remaining > tail[k]:
            return
        bit = 1 << k
        for v in range(0, min(ub[k], remaining) + 1):
            ok = True
            for s in range(bit):
                total = sums[s] + v
                if rp1 - total <= t.values[s | bit]:
                    ok = False
                    break
                sums[s | bit] = total
            if not ok:
                break
            m[k] = v
            rec(k + 1, remaining - v)
        m[k] = 0

    if h >= 0:
        rec(0, h)
    return frozenset(out)


def dimension_and_support(t: RankTable) -> MultidegreeSupport:
    for h in range(t.r, -1, -1):
        found = enumerate_M(t, h)
        if found:
            return MultidegreeSupport(p=h, support=found)
    raise EmptySupport("no feasible degree vector, not even zero")


def _is_tight(t: RankTable, m: DegreeVector) -> bool:
    sums = subset_sums(m)
    for k in range(t.n):
        bit = 1 << k
        if not any(
            (mask & bit) and t.r_plus_1 - sums[mask] == t.values[mask] + 1 for mask in range(1, 1 << t.n)
        ):
            return False
    return True


def widehat_M(t: RankTable) -> frozenset[DegreeVector]:
    """Feasible vectors of degree 1..p tight in every coordinate."""
    p = dimension_and_support(t).p
    out: set[DegreeVector] = set()
    for h in range(1, p + 1):
        out.update(m for m in enumerate_M(t, h) if _is_tight(t, m))
    return frozenset(out)


def check_matroid_identity(t: RankTable) -> bool:
    support = dimension_and_support(t)
    if support.p == 0:
        log.warning("p = 0: the tight-vector identity is vacuous for this table")
        return True
    return widehat_M(t) == support.support


def enumerate_D(t: RankTable, p: int) -> frozenset[DegreeVector]:
    """All u with sum p and u_i <= r - d_i."""
    ranges = [range(0, max(b, -1) + 1) for b in block_bounds(t)]
    return frozenset(u for u in itertools.product(*ranges) if sum(u) == p)


def violating_subsets(t: RankTable, c: DegreeVector) -> list[int]:
    """Nonempty masks I with r+1 - sum_I c_i <= d_I."""
    sums = subset_sums(c)
    return [mask for mask in range(1, 1 << t.n) if t.r_plus_1 - sums[mask] <= t.values[mask]]


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def predicted_section_dims(t: RankTable, c: DegreeVector) -> tuple[dict[int, int], dict[int, int]]:
    """Minimal possible intersection dimensions for sections V^i of codim c_i containing V_i.

    Returns (by_subset, by_block): dim of the intersection of V^i over each nonempty I, and
    for each block k the dim of (intersection of all V^i) meet V_k.
    """
    sums = subset_sums(c)
    full = t.full_mask
    by_subset: dict[int, int] = {}
    for mask in range(1, full + 1):
        by_subset[mask] = max(t.values[j] - sums[mask ^ j] for j in _submasks(mask))
    by_block: dict[int, int] = {}
    for k in range(1, t.n + 1):
        bit = 1 << (k - 1)
        best = max(t.values[j] - sums[full ^ j] for j in range(1, full + 1) if j & bit)
        by_block[k] = max(0, best)
    return by_subset, by_block
