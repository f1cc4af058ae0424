from __future__ import annotations

import itertools
import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

from projclosure.domain.errors import DegreeMismatch, EmptySupport
from projclosure.domain.models import DegreeVector, MultidegreeSupport, MultiHilbertPoly

# Polynomial in u_1..u_n: exponent tuple -> rational coefficient.
_Expanded = dict[tuple[int, ...], Fraction]


def _componentwise_min(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(min(x, y) for x, y in zip(a, b))


def _check_support(vectors: Sequence[DegreeVector]) -> int:
    if not vectors:
        raise EmptySupport()
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise ValueError("MIXED_LENGTH_SUPPORT")
    return n


def hilbert_polynomial(support: MultidegreeSupport | Iterable[DegreeVector]) -> MultiHilbertPoly:
    """Inclusion-exclusion over nonempty subsets of the support, collapsed by min-vector.

    acc[ell] is the signed number of nonempty subsets among the components seen so
    far whose componentwise minimum is ell; adding a component e contributes {e}
    itself and S + {e} (sign flipped, minimum min(ell, e)) for every earlier S.
    """
    vectors = sorted(support.support if isinstance(support, MultidegreeSupport) else set(support))
    n = _check_support(vectors)
    acc: dict[tuple[int, ...], int] = defaultdict(int)
    for e in vectors:
        step: dict[tuple[int, ...], int] = defaultdict(int)
        step[tuple(e)] += 1
        for ell, c in acc.items():
            if c:
                step[_componentwise_min(ell, e)] -= c
        for ell, c in step.items():
            acc[ell] += c
    return MultiHilbertPoly.from_counts(n, acc)


def hilbert_polynomial_naive(support: MultidegreeSupport | Iterable[DegreeVector]) -> MultiHilbertPoly:
    """Direct sum over all 2^k - 1 nonempty subsets."""
    vectors = sorted(support.support if isinstance(support, MultidegreeSupport) else set(support))
    n = _check_support(vectors)
    acc: dict[tuple[int, ...], int] = defaultdict(int)
    for k in range(1, len(vectors) + 1):
        sign = 1 if k % 2 else -1
        for subset in itertools.combinations(vectors, k):
            ell = subset[0]
            for v in subset[1:]:
                ell = _componentwise_min(ell, v)
            acc[tuple(ell)] += sign
    return MultiHilbertPoly.from_counts(n, acc)


def hilbert_polynomial_pairwise(components: Sequence[DegreeVector]) -> MultiHilbertPoly:
    """HP of a union of coordinate products by HP(A u B) = HP(A) + HP(B) - HP(A n B).

    Components are taken in the given order; the intersection of two coordinate
    products is the product indexed by the componentwise minimum.
    """
    vectors = list(dict.fromkeys(tuple(v) for v in components))
    n = _check_support(vectors)

    def rec(items: tuple[tuple[int, ...], ...]) -> dict[tuple[int, ...], int]:
        if len(items) == 1:
            return {items[0]: 1}
        head, last = items[:-1], items[-1]
        out: dict[tuple[int, ...], int] = defaultdict(int)
        for ell, c in rec(head).items():
            out[ell] += c
        out[last] += 1
        meets = tuple(dict.fromkeys(_componentwise_min(v, last) for v in head))
        for ell, c in rec(meets).items():
            out[ell] -= c
        return out

    return MultiHilbertPoly.from_counts(n, rec(tuple(vectors)))


def evaluate(poly: MultiHilbertPoly, u: DegreeVector) -> int:
    if len(u) != poly.n or any(x < 0 for x in u):
        raise ValueError("BAD_DEGREE_VECTOR")
    return sum(t.coeff * math.prod(math.comb(ui + e, e) for ui, e in zip(u, t.ell)) for t in poly.terms)


def _binomial_in_u(ell: int) -> list[Fraction]:
    """Coefficients (ascending powers) of binom(u + ell, ell) = prod_{k=1..ell} (u + k) / k."""
    coeffs = [Fraction(1)]
    for k in range(1, ell + 1):
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for power, c in enumerate(coeffs):
            nxt[power] += c * k
            nxt[power + 1] += c
        coeffs = [c / k for c in nxt]
    return coeffs


def expand(poly: MultiHilbertPoly) -> _Expanded:
    out: _Expanded = defaultdict(Fraction)
    for term in poly.terms:
        factors = [_binomial_in_u(e) for e in term.ell]
        for powers in itertools.product(*(range(len(f)) for f in factors)):
            c = Fraction(term.coeff)
            for f, k in zip(factors, powers):
                c *= f[k]
            out[powers] += c
    return {k: v for k, v in out.items() if v != 0}


def leading_multidegree(poly: MultiHilbertPoly, p: int) -> dict[DegreeVector, Fraction]:
    """Top-degree coefficients scaled by prod m_i!, keyed by exponent vector."""
    expanded = expand(poly)
    degree = max((sum(k) for k in expanded), default=-1)
    if degree != p:
        raise DegreeMismatch(f"total degree {degree} != {p}")
    return {
        k: c * math.prod(math.factorial(x) for x in k) for k, c in sorted(expanded.items()) if sum(k) == p
    }


def is_multiplicity_free(poly: MultiHilbertPoly, support: MultidegreeSupport) -> bool:
    """Leading coefficients are exactly the 0/1 indicator of M(p)."""
    try:
        top = leading_multidegree(poly, support.p)
    except DegreeMismatch:
        return False
    return top == {m: Fraction(1) for m in support.support}
