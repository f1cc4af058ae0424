from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from projclosure.calc.arrangement import rank_table
from projclosure.calc.degrees import dimension_and_support
from projclosure.calc.hilbert import evaluate, hilbert_polynomial, is_multiplicity_free
from projclosure.calc.monomial import (
    add_ideals,
    all_block_monomials,
    count_standard,
    initial_ideal,
    initial_ideal_via_intersection,
    intersect_ideals,
    is_member,
    max_generator_length,
    minimalize,
    prime_component,
    satisfies_generator_condition,
    standard_monomial_count,
    to_block_ideal,
)
from projclosure.domain.config import Budgets
from projclosure.domain.errors import BudgetExceeded, InfeasibleVector, InvariantViolation
from projclosure.domain.models import BlockMonomial, BlockMonomialIdeal, BlockVar, RankTable

from conftest import camera, coverage_table, identity, planes_and_line, random_realized_table, three_points

PLANES_AND_LINE_GENERATORS = [
    "x[1,1]*x[2,1]",
    "x[1,1]*x[3,1]",
    "x[2,1]*x[3,1]",
    "x[1,1]*x[2,2]*x[3,2]",
    "x[1,2]*x[2,1]*x[3,2]",
    "x[1,2]*x[2,2]*x[3,1]",
]

EXAMPLES = [planes_and_line, camera, three_points, identity]


def test_planes_and_line_initial_ideal() -> None:
    ideal = initial_ideal(rank_table(planes_and_line()))
    assert sorted(ideal.render()) == sorted(PLANES_AND_LINE_GENERATORS)
    assert max_generator_length(ideal) == 3
    assert ideal.block_sizes == (3, 3, 4)


def test_small_initial_ideals() -> None:
    assert initial_ideal(rank_table(camera())).render() == ["x[1,1]*x[2,1]"]
    assert initial_ideal(rank_table(three_points())).render() == ["x[1,1]*x[2,1]*x[3,1]"]
    ident = initial_ideal(rank_table(identity()))
    assert ident.is_zero
    assert max_generator_length(ident) == 0


@pytest.mark.parametrize("build", EXAMPLES)
def test_generators_agree_with_prime_decomposition(build) -> None:
    t = rank_table(build())
    assert initial_ideal_via_intersection(t) == initial_ideal(t)


def test_prime_components_of_camera() -> None:
    t = rank_table(camera())
    assert prime_component(t, (1, 2)) == {BlockVar(1, 1)}
    assert prime_component(t, (2, 1)) == {BlockVar(2, 1)}
    assert prime_component(t, (0, 0)) == {BlockVar(1, j) for j in (1, 2)} | {BlockVar(2, j) for j in (1, 2)}
    with pytest.raises(InfeasibleVector):
        prime_component(t, (3, 0))


@pytest.mark.parametrize("build", EXAMPLES)
def test_membership_trichotomy(build) -> None:
    t = rank_table(build())
    ideal = initial_ideal(t)
    for mono in all_block_monomials(t.block_sizes()):
        assert is_member(mono, ideal) == satisfies_generator_condition(t, mono), mono.render()


def test_length_bound() -> None:
    for build in EXAMPLES:
        t = rank_table(build())
        assert max_generator_length(initial_ideal(t)) <= min(t.r_plus_1, t.n)


def test_block_divisibility() -> None:
    g = BlockMonomial((1, 0, 2))
    assert g.divides(BlockMonomial((1, 3, 2)))
    assert not g.divides(BlockMonomial((1, 3, 1)))
    assert not g.divides(BlockMonomial((0, 0, 2)))


def test_camera_standard_counts() -> None:
    t = rank_table(camera())
    ideal = initial_ideal(t)
    assert standard_monomial_count(ideal, t, (1, 1)) == 8
    assert standard_monomial_count(ideal, t, (2, 1)) == 15
    assert standard_monomial_count(ideal, t, (0, 0)) == 1


@pytest.mark.parametrize("build", EXAMPLES)
def test_hilbert_polynomial_counts_standard_monomials(build) -> None:
    t = rank_table(build())
    ideal = initial_ideal(t)
    poly = hilbert_polynomial(dimension_and_support(t))
    for u in itertools.product(range(5), repeat=t.n):
        assert evaluate(poly, u) == standard_monomial_count(ideal, t, u), u


def test_standard_count_budget() -> None:
    t = rank_table(planes_and_line())
    with pytest.raises(BudgetExceeded):
        standard_monomial_count(initial_ideal(t), t, (9, 9, 9), Budgets(standard_monomial_budget=100))


def test_to_block_ideal_rejects_two_variables_in_a_block() -> None:
    with pytest.raises(InvariantViolation):
        to_block_ideal([frozenset({BlockVar(1, 1), BlockVar(1, 2)})], (2, 2))


def _random_degree_one(rng: random.Random, sizes: tuple[int, ...]) -> frozenset[frozenset[BlockVar]]:
    pool = [BlockVar(i, j) for i, s in enumerate(sizes, start=1) for j in range(1, s + 1)]
    return frozenset(frozenset([v]) for v in rng.sample(pool, rng.randint(1, len(pool))))


def test_degree_one_interchange_identity() -> None:
    rng = random.Random(5)
    sizes = (3, 2, 3)
    for _ in range(50):
        n = rng.randint(2, 4)
        ideals = [_random_degree_one(rng, sizes) for _ in range(n)]
        *head, last = ideals
        left = head[0]
        for i in head[1:]:
            left = intersect_ideals(left, i)
        left = add_ideals(left, last)
        right = add_ideals(head[0], last)
        for i in head[1:]:
            right = intersect_ideals(right, add_ideals(i, last))
        assert left == right


def test_standard_counts_are_inclusion_exclusion() -> None:
    rng = random.Random(11)
    sizes = (2, 3)
    for _ in range(30):
        a, b = _random_degree_one(rng, sizes), _random_degree_one(rng, sizes)
        for u in itertools.product(range(3), repeat=2):
            both = count_standard(intersect_ideals(a, b), sizes, u)
            assert both == (
                count_standard(a, sizes, u) + count_standard(b, sizes, u) - count_standard(add_ideals(a, b), sizes, u)
            )


def test_minimalize_drops_multiples() -> None:
    x, y = BlockVar(1, 1), BlockVar(2, 1)
    assert minimalize([frozenset({x}), frozenset({x, y}), frozenset({y})]) == {frozenset({x}), frozenset({y})}


def test_abstract_table_runs_same_pipeline() -> None:
    t = RankTable.from_mapping(2, 4, {"1": 1, "2": 1, "1,2": 0})
    assert initial_ideal(t) == BlockMonomialIdeal((3, 3), frozenset({BlockMonomial((1, 1))}))


def _check_table(t: RankTable) -> None:
    support = dimension_and_support(t)
    if support.p == 0:
        return
    ideal = initial_ideal(t)
    assert initial_ideal_via_intersection(t) == ideal, t.as_mapping()
    assert max_generator_length(ideal) <= min(t.r_plus_1, t.n)
    poly = hilbert_polynomial(support)
    assert is_multiplicity_free(poly, support), t.as_mapping()
    for u in itertools.product(range(5), repeat=t.n):
        assert evaluate(poly, u) == standard_monomial_count(ideal, t, u), (t.as_mapping(), u)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_invariants_on_random_arrangements(k: int) -> None:
    _check_table(random_realized_table(k))


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.large_base_example])
@given(st.randoms(use_true_random=False))
def test_invariants_on_abstract_tables(rng: random.Random) -> None:
    _check_table(coverage_table(rng))
