from __future__ import annotations

import random

import pytest

from projclosure.calc.arrangement import rank_table, reduce_to_prime
from projclosure.calc.generate import random_arrangement
from projclosure.domain.config import Budgets
from projclosure.domain.errors import FieldMismatch, VariableBudgetExceeded
from projclosure.domain.models import BlockVar
from projclosure.domain.seeds import derive_rng
from projclosure.oracle.detideal import (
    build_B,
    genericity_check,
    minor_ideal,
    natural_projection_matrices,
    projection_matrices,
    verify_initial,
)
from projclosure.oracle.groebner import LexOrder

from conftest import Q, camera, identity, planes_and_line, three_points, two_lines_k3


def test_natural_coordinates_fail_genericity() -> None:
    a = camera()
    As = natural_projection_matrices(a)
    assert [len(m.rows) for m in As] == [3, 3]
    report = genericity_check(As, rank_table(a))
    assert not report
    assert report.exhaustive
    assert report.witness is not None
    assert {blk for blk, _ in report.witness} == {1, 2}


def test_random_coordinates_pass_genericity() -> None:
    a = camera()
    As = projection_matrices(a, random.Random(4))
    report = genericity_check(As, rank_table(a))
    assert report
    assert report.exhaustive
    assert report.subsets_checked > 0


def test_projection_kernels_are_the_subspaces() -> None:
    a = planes_and_line()
    for v, m in zip(a.subspaces, projection_matrices(a, random.Random(2))):
        assert m.n_rows == a.ambient_dim - v.dim
        for vec in v.vectors:
            assert all(x == 0 for x in m.apply(vec))


def test_sampled_genericity_for_many_rows() -> None:
    a = planes_and_line()
    report = genericity_check(projection_matrices(a, random.Random(9)), rank_table(a), exhaustive_rows=4, budget=20)
    assert report
    assert not report.exhaustive


def test_build_B_shapes() -> None:
    a = camera()
    t = rank_table(a)
    As = natural_projection_matrices(a)
    both = build_B(As, [2, 1], t)
    assert (both.n_rows, both.n_cols) == (6, 6)
    assert both.entries[0][4] == BlockVar(1, 1)
    assert both.entries[3][5] == BlockVar(2, 1)
    assert both.entries[0][5] == 0
    single = build_B(As, [1], t)
    assert (single.n_rows, single.n_cols) == (3, 5)
    with pytest.raises(ValueError, match="EMPTY_SUBSET"):
        build_B(As, [], t)


def test_camera_minor_ideal_is_one_determinant() -> None:
    a = camera()
    minors = minor_ideal(a, projection_matrices(a, random.Random(1)))
    assert len(minors) == 1
    order = LexOrder(rank_table(a).block_sizes())
    assert minors[0].is_multihomogeneous(order)


def test_three_points_minor_ideal() -> None:
    a = three_points()
    assert len(minor_ideal(a, projection_matrices(a, random.Random(1)))) == 1


def test_identity_has_no_minors() -> None:
    a = identity()
    assert minor_ideal(a, natural_projection_matrices(a)) == []


@pytest.mark.parametrize(
    "build, expected",
    [
        (camera, ("x[1,1]*x[2,1]",)),
        (three_points, ("x[1,1]*x[2,1]*x[3,1]",)),
        (identity, ()),
    ],
)
def test_verify_initial(build, expected) -> None:
    verdict = verify_initial(build(), derive_rng(0, "groebner"))
    assert verdict
    assert verdict.leading == expected
    assert verdict.expected == expected
    assert verdict.exhaustive_genericity
    assert verdict.attempts >= 1


def test_verify_initial_needs_rationals_and_respects_budget() -> None:
    reduced = reduce_to_prime(camera(), 101)
    assert reduced is not None
    with pytest.raises(FieldMismatch):
        verify_initial(reduced, random.Random(0))
    with pytest.raises(VariableBudgetExceeded):
        verify_initial(camera(), random.Random(0), Budgets(max_variables=5))


def test_verify_initial_two_lines() -> None:
    verdict = verify_initial(two_lines_k3(), derive_rng(0, "groebner"))
    assert verdict
    assert verdict.leading == verdict.expected


@pytest.mark.parametrize(
    "ambient, dims",
    [
        (4, (1, 1, 1)),
        (4, (2, 1)),
        (5, (2, 2, 1)),
        (5, (2, 1, 1)),
    ],
)
def test_verify_initial_random_arrangements(ambient: int, dims: tuple[int, ...]) -> None:
    a = random_arrangement(Q, ambient, dims, derive_rng(3, f"arr:{ambient}:{dims}"))
    verdict = verify_initial(a, derive_rng(3, "groebner"))
    assert verdict, (verdict.leading, verdict.expected)
    assert verdict.leading == verdict.expected
