from __future__ import annotations

import random
import sys
from pathlib import Path

# Ensure src/ layout is importable even if the package isn't installed yet.
ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from projclosure.calc.arrangement import Arrangement, rank_table  # noqa: E402
from projclosure.calc.generate import random_arrangement  # noqa: E402
from projclosure.domain.config import Budgets  # noqa: E402
from projclosure.domain.field import FieldSpec  # noqa: E402
from projclosure.domain.models import RankTable  # noqa: E402
from projclosure.domain.seeds import derive_rng  # noqa: E402

DATA = ROOT / "data"
Q = FieldSpec.rational()


def unit(n: int, i: int) -> list[int]:
    """e_i in K^n, 1-based."""
    return [1 if k == i - 1 else 0 for k in range(n)]


def planes_and_line(field: FieldSpec = Q) -> Arrangement:
    """K^5 with V_1=<e1,e2>, V_2=<e1,e3>, V_3=<e5>."""
    return Arrangement.from_bases(
        field, 5, [[unit(5, 1), unit(5, 2)], [unit(5, 1), unit(5, 3)], [unit(5, 5)]]
    )


def camera(field: FieldSpec = Q) -> Arrangement:
    """K^4 with V_1=<e1>, V_2=<e2>."""
    return Arrangement.from_bases(field, 4, [[unit(4, 1)], [unit(4, 2)]])


def two_lines_k3(field: FieldSpec = Q) -> Arrangement:
    return Arrangement.from_bases(field, 3, [[unit(3, 1)], [unit(3, 2)]])


def three_points(field: FieldSpec = Q) -> Arrangement:
    """Three coordinate points of P^2."""
    return Arrangement.from_bases(field, 3, [[unit(3, 1)], [unit(3, 2)], [unit(3, 3)]])


def identity(ambient: int = 4, field: FieldSpec = Q) -> Arrangement:
    """n=1, V_1={0}: the identity map of P^r."""
    return Arrangement.from_bases(field, ambient, [[]])


def random_realized_table(k: int) -> RankTable:
    """Rank table of the k-th random arrangement over Q: ambient 2..6, n 1..4."""
    rng = derive_rng(k, "matroid-identity")
    ambient = rng.randint(2, 6)
    n = rng.randint(1, 4)
    while True:
        dims = [rng.randint(0, ambient - 1) for _ in range(n)]
        if sum(ambient - d for d in dims) >= ambient:
            break
    # small heights make special position likely
    budgets = Budgets(random_height=1 + k % 3, retry_budget=200)
    a = random_arrangement(FieldSpec.rational(), ambient, dims, rng, budgets)
    return rank_table(a, budgets)


def coverage_table(rng: random.Random) -> RankTable:
    """Truncated coverage: corank(I) = min(r+1, |union of S_i over I|)."""
    r_plus_1 = rng.randint(2, 7)
    n = rng.randint(1, 4)
    ground = list(range(r_plus_1 + 2))
    while True:
        sets = [frozenset(rng.sample(ground, rng.randint(1, len(ground)))) for _ in range(n)]
        if len(frozenset().union(*sets)) >= r_plus_1:
            break
    values = [r_plus_1]
    for mask in range(1, 1 << n):
        covered = frozenset().union(*(s for i, s in enumerate(sets) if mask >> i & 1))
        values.append(r_plus_1 - min(r_plus_1, len(covered)))
    return RankTable(n=n, r_plus_1=r_plus_1, values=tuple(values), abstract=True)
