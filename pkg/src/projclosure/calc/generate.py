from __future__ import annotations

import logging
import random
from typing import Sequence

from projclosure.calc.arrangement import Arrangement
from projclosure.calc.linalg import Subspace, random_vector
from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import InvalidCodim, ProjClosureError, RetryBudgetExhausted
from projclosure.domain.field import FieldSpec
from projclosure.validate.validate_arrangement import validate_arrangement

log = logging.getLogger(__name__)


def random_arrangement(
    field: FieldSpec,
    ambient_dim: int,
    dims: Sequence[int],
    rng: random.Random,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Arrangement:
    """Random V_i of the requested dimensions, resampled until the arrangement validates."""
    if ambient_dim < 1 or not dims:
        raise InvalidCodim(f"ambient {ambient_dim} with dims {list(dims)}")
    for d in dims:
        if d < 0 or d > ambient_dim:
            raise InvalidCodim(f"dim {d} in K^{ambient_dim}")
    last: ProjClosureError | None = None
    for attempt in range(budgets.retry_budget):
        subs: list[Subspace] = []
        for d in dims:
            rows = [random_vector(field, ambient_dim, rng, budgets.random_height) for _ in range(d)]
            subs.append(Subspace.span(field, ambient_dim, rows))
        if any(s.dim != d for s, d in zip(subs, dims)):
            continue
        a = Arrangement(field, ambient_dim, tuple(subs))
        try:
            validate_arrangement(a)
        except ProjClosureError as e:
            last = e
            continue
        if attempt:
            log.info("random arrangement accepted after %d resamples", attempt)
        return a
    raise RetryBudgetExhausted(f"dims {list(dims)} in K^{ambient_dim}: {last}" if last else None)
