from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from projclosure.calc.arrangement import rank_table
from projclosure.calc.degrees import dimension_and_support
from projclosure.calc.hilbert import (
    evaluate,
    expand,
    hilbert_polynomial,
    hilbert_polynomial_naive,
    hilbert_polynomial_pairwise,
    is_multiplicity_free,
    leading_multidegree,
)
from projclosure.domain.errors import EmptySupport
from projclosure.domain.models import MultidegreeSupport

from conftest import camera, identity, planes_and_line, three_points


def test_camera_polynomial() -> None:
    poly = hilbert_polynomial(dimension_and_support(rank_table(camera())))
    assert poly.as_counts() == {(1, 2): 1, (2, 1): 1, (1, 1): -1}
    assert evaluate(poly, (1, 1)) == 8
    assert evaluate(poly, (2, 1)) == 15
    assert evaluate(poly, (0, 0)) == 1
    assert "binom(u1+2,2)*binom(u2+1,1)" in poly.render()


def test_identity_polynomial_is_projective_space() -> None:
    poly = hilbert_polynomial(dimension_and_support(rank_table(identity())))
    assert poly.as_counts() == {(3,): 1}
    for u in range(6):
        assert evaluate(poly, (u,)) == math.comb(u + 3, 3)


def test_three_points_polynomial() -> None:
    poly = hilbert_polynomial(dimension_and_support(rank_table(three_points())))
    assert evaluate(poly, (1, 1, 1)) == 7
    assert evaluate(poly, (0, 0, 0)) == 1


@pytest.mark.parametrize("build", [planes_and_line, camera, three_points, identity])
def test_three_evaluations_agree(build) -> None:
    support = dimension_and_support(rank_table(build()))
    collapsed = hilbert_polynomial(support)
    assert hilbert_polynomial_naive(support) == collapsed
    assert hilbert_polynomial_pairwise(support.sorted_support()) == collapsed


def test_random_supports_agree() -> None:
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 3)
        vectors = {tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(rng.randint(1, 6))}
        order = list(vectors)
        rng.shuffle(order)
        collapsed = hilbert_polynomial(vectors)
        assert hilbert_polynomial_naive(vectors) == collapsed
        assert hilbert_polynomial_pairwise(order) == collapsed


@pytest.mark.parametrize("build", [planes_and_line, camera, three_points, identity])
def test_leading_coefficients_are_the_support_indicator(build) -> None:
    support = dimension_and_support(rank_table(build()))
    poly = hilbert_polynomial(support)
    assert leading_multidegree(poly, support.p) == {m: Fraction(1) for m in support.support}
    assert is_multiplicity_free(poly, support)


def test_expand_binomial() -> None:
    poly = hilbert_polynomial([(2,)])
    # binom(u+2, 2) = (u^2 + 3u + 2) / 2
    assert expand(poly) == {(0,): Fraction(1), (1,): Fraction(3, 2), (2,): Fraction(1, 2)}


def test_multiplicity_free_requires_matching_degree() -> None:
    support = MultidegreeSupport(p=2, support=frozenset({(1, 1)}))
    assert is_multiplicity_free(hilbert_polynomial([(1, 1)]), support)
    assert not is_multiplicity_free(hilbert_polynomial([(2, 1)]), support)


def test_empty_support_and_bad_degrees() -> None:
    with pytest.raises(EmptySupport):
        hilbert_polynomial([])
    poly = hilbert_polynomial([(1, 1)])
    with pytest.raises(ValueError):
        evaluate(poly, (1,))
    with pytest.raises(ValueError):
        evaluate(poly, (-1, 0))
