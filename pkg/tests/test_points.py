from __future__ import annotations

import itertools
import random

import pytest

from projclosure.calc.arrangement import good_prime_reduction, rank_table
from projclosure.calc.degrees import predicted_section_dims
from projclosure.calc.linalg import Subspace, combine, complement_in, is_subspace
from projclosure.domain.config import Budgets
from projclosure.domain.errors import (
    BudgetExceeded,
    DegreeMismatch,
    FieldMismatch,
    InfeasibleCodim,
    InvalidCodim,
    InvariantViolation,
    NotInClosure,
)
from projclosure.domain.field import FieldSpec
from projclosure.domain.models import subset_key
from projclosure.domain.seeds import derive_rng
from projclosure.oracle.points import (
    TupleW,
    count_intersection_points,
    generic_sections,
    in_closure,
    projective_points,
    projective_size,
    sample_sections,
    witness_curve,
)

from conftest import camera, planes_and_line, unit


def _example_tuple() -> tuple:
    a = planes_and_line()
    return a, TupleW.extend(a, [unit(5, 3), unit(5, 4), unit(5, 1)])


def test_example_tuple_is_in_the_closure() -> None:
    a, tw = _example_tuple()
    assert in_closure(a, tw)


def test_tuple_outside_the_closure() -> None:
    a = planes_and_line()
    tw = TupleW.extend(a, [unit(5, 4), unit(5, 5), unit(5, 4)])
    assert not in_closure(a, tw)
    with pytest.raises(NotInClosure):
        witness_curve(a, tw)


def test_tuple_must_extend_each_subspace_by_one() -> None:
    a = planes_and_line()
    with pytest.raises(InvariantViolation):
        TupleW.build(a, list(a.subspaces))
    with pytest.raises(InvariantViolation):
        TupleW.extend(a, [unit(5, 3), unit(5, 4)])
    with pytest.raises(InvariantViolation):
        TupleW.extend(a, [unit(5, 1), unit(5, 4), unit(5, 1)])


def test_witness_curve_for_example_tuple() -> None:
    a, tw = _example_tuple()
    curve = witness_curve(a, tw, random.Random(0))
    assert curve.w == (tuple(unit(5, 1)), tuple(unit(5, 3)), tuple(unit(5, 4)))
    assert curve.stage_sets == ((1, 2, 3), (1, 2), (2,))
    assert curve.assignment == (1, 2, 0)
    f = a.field
    t = f.coerce(3)
    # block 1 sees e3 + t*e4, block 3 the whole curve
    assert curve.tail(1, t) == tuple(f.coerce(x) for x in [0, 0, 1, 3, 0])
    assert curve.point(t) == tuple(f.coerce(x) for x in [1, 0, 3, 9, 0])


def test_tuple_in_the_image_needs_one_stage() -> None:
    a = planes_and_line()
    v = [1, 0, 0, 1, 1]
    tw = TupleW.extend(a, [v, v, v])
    assert in_closure(a, tw)
    curve = witness_curve(a, tw)
    assert len(curve.w) == 1
    assert curve.assignment == (0, 0, 0)


def test_sections_meet_predicted_dimensions() -> None:
    a = planes_and_line()
    t = rank_table(a)
    c = (1, 1, 2)
    sample = sample_sections(a, c, random.Random(5))
    by_subset, _ = predicted_section_dims(t, c)
    assert sample.dims == {subset_key(m): d for m, d in by_subset.items()}
    for v, s, ci in zip(a.subspaces, sample.sections, c):
        assert s.dim == a.ambient_dim - ci
        assert is_subspace(v, s)
    assert len(generic_sections(a, c, random.Random(5))) == 3


def test_section_codims_are_checked() -> None:
    a = planes_and_line()
    with pytest.raises(InvalidCodim):
        sample_sections(a, (1, 1), random.Random(0))
    with pytest.raises(InfeasibleCodim):
        sample_sections(a, (3, 0, 1), random.Random(0))


def test_projective_points() -> None:
    f = FieldSpec.prime(5)
    pts = list(projective_points(f, 3))
    assert len(pts) == projective_size(5, 3) == 31
    assert len(set(pts)) == 31
    assert pts[0] == (1, 0, 0)
    assert projective_size(11, 1) == 1


def test_camera_counts_over_f101() -> None:
    a, q = good_prime_reduction(camera(), 101)
    for c in [(1, 2), (2, 1)]:
        result = count_intersection_points(a, c, derive_rng(0, f"camera:{c}"))
        assert result.count == 1
        assert result.in_support and result.certified
        assert result.expected == 1
        assert result.q == q


def test_planes_and_line_counts_over_f11() -> None:
    a, _ = good_prime_reduction(planes_and_line(), 11)
    outside = count_intersection_points(a, (2, 2, 0), derive_rng(0, "outside"))
    assert not outside.in_support
    assert outside.certified
    assert outside.count == 0
    inside = count_intersection_points(a, (2, 1, 1), derive_rng(0, "inside"))
    assert inside.in_support
    assert inside.count == 1


def test_count_preconditions() -> None:
    with pytest.raises(FieldMismatch):
        count_intersection_points(camera(), (1, 2), random.Random(0))
    a, _ = good_prime_reduction(planes_and_line(), 101)
    with pytest.raises(DegreeMismatch):
        count_intersection_points(a, (1, 1, 1), random.Random(0))
    with pytest.raises(BudgetExceeded):
        count_intersection_points(a, (1, 1, 2), random.Random(0), Budgets(point_budget=1000))


def test_exhaustive_scan_over_f5() -> None:
    """Every pair (W_1, W_2) for the two-point instance over F_5.

    The pair is in the closure iff W_1 + W_2 is not everything, which happens for
    211 of the 31 * 31 pairs.
    """
    f = FieldSpec.prime(5)
    a = camera(f)
    whole = Subspace.whole(f, 4)
    comps = [complement_in(v, whole) for v in a.subspaces]
    hits = 0
    for c1, c2 in itertools.product(projective_points(f, 3), repeat=2):
        w1 = combine(f, c1, comps[0], 4)
        w2 = combine(f, c2, comps[1], 4)
        if in_closure(a, TupleW.extend(a, [w1, w2])):
            hits += 1
    assert hits == 211
