from __future__ import annotations

from projclosure.domain.errors import AxiomViolation
from projclosure.domain.models import RankTable, subset_key


def _k(mask: int) -> str:
    return "{" + subset_key(mask) + "}"


def validate_rank_table(t: RankTable) -> None:
    """Check the axioms of an intersection-dimension table.

    The corank r+1-d_I is a polymatroid rank: d is monotone decreasing and
    d_{I|J} + d_{I&J} >= d_I + d_J. The local form over (S, i, j) is equivalent
    to the full pairwise condition, so the check is exact for every n.
    """
    full = t.full_mask
    rp1 = t.r_plus_1

    for mask in range(1, full + 1):
        d = t.values[mask]
        if d < 0 or d > rp1:
            raise AxiomViolation(f"bounds: d{_k(mask)}={d} outside [0,{rp1}]", I=subset_key(mask))

    if t.values[full] != 0:
        raise AxiomViolation(f"d{_k(full)}={t.values[full]} != 0", I=subset_key(full))

    for mask in range(0, full + 1):
        for i in range(t.n):
            bit = 1 << i
            if mask & bit:
                continue
            if t.values[mask | bit] > t.values[mask]:
                raise AxiomViolation(
                    f"monotone: d{_k(mask | bit)} > d{_k(mask)}",
                    I=subset_key(mask),
                    J=subset_key(mask | bit),
                )

    for s in range(0, full + 1):
        for i in range(t.n):
            bi = 1 << i
            if s & bi:
                continue
            for j in range(i + 1, t.n):
                bj = 1 << j
                if s & bj:
                    continue
                a, b = s | bi, s | bj
                if t.values[a | b] + t.values[s] < t.values[a] + t.values[b]:
                    raise AxiomViolation(
                        f"corank submodularity: d{_k(a | b)}+d{_k(s)} < d{_k(a)}+d{_k(b)}",
                        I=subset_key(a),
                        J=subset_key(b),
                    )

    for i in range(1, t.n + 1):
        if t.single(i) > t.r:
            raise AxiomViolation(f"bounds: d{{{i}}}={t.single(i)} leaves P(V/V_{i}) empty", I=str(i))
