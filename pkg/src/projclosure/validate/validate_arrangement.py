from __future__ import annotations

from projclosure.calc.arrangement import Arrangement
from projclosure.calc.linalg import intersect_all
from projclosure.domain.errors import (
    AmbientMismatch,
    FieldMismatch,
    ImproperSubspace,
    NonTrivialCommonIntersection,
)


def validate_arrangement(a: Arrangement) -> None:
    if a.ambient_dim < 1:
        raise AmbientMismatch("ambient_dim must be >= 1")
    if a.n < 1:
        raise ValueError("EMPTY_ARRANGEMENT")

    for i, s in enumerate(a.subspaces, start=1):
        if s.field != a.field:
            raise FieldMismatch(f"V_{i} is over {s.field.label}, arrangement over {a.field.label}")
        if s.ambient_dim != a.ambient_dim:
            raise AmbientMismatch(f"V_{i} lives in K^{s.ambient_dim}, expected K^{a.ambient_dim}")

    common = intersect_all(list(a.subspaces))
    if common.dim != 0:
        raise NonTrivialCommonIntersection(f"dim {common.dim}", dim=common.dim)

    for i, s in enumerate(a.subspaces, start=1):
        if s.dim >= a.ambient_dim:
            raise ImproperSubspace(f"V_{i} is the whole space", index=i)
