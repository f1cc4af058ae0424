from __future__ import annotations

from dataclasses import dataclass
from typing import Final


@dataclass(frozen=True, slots=True)
class Budgets:
    """Caps and sampling parameters shared by every computation.

    Defaults suit desk-scale instances (ambient dimension up to about 12).
    """

    random_height: int = 1000
    retry_budget: int = 50
    max_subsets_n: int = 20
    genericity_exhaustive_rows: int = 16
    genericity_samples: int = 200
    max_variables: int = 12
    max_terms: int = 20_000
    max_basis: int = 2_000
    max_reductions: int = 50_000
    max_minors: int = 50_000
    support_budget: int = 4_096
    standard_monomial_budget: int = 10**7
    point_budget: int = 10**6
    naive_hilbert_limit: int = 12
    curve_samples: int = 5


DEFAULT_BUDGETS: Final[Budgets] = Budgets()
