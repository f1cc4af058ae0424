from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable

from projclosure.calc.arrangement import Arrangement, good_prime_reduction
from projclosure.calc.degrees import (
    check_matroid_identity,
    dimension_and_support,
    enumerate_D,
    enumerate_M,
    widehat_M,
)
from projclosure.calc.hilbert import (
    evaluate,
    hilbert_polynomial,
    hilbert_polynomial_naive,
    hilbert_polynomial_pairwise,
    is_multiplicity_free,
)
from projclosure.calc.monomial import (
    all_block_monomials,
    initial_ideal,
    initial_ideal_via_intersection,
    is_member,
    max_generator_length,
    satisfies_generator_condition,
    standard_monomial_count,
)
from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import (
    AxiomViolation,
    BudgetError,
    BudgetExceeded,
    GenericityNotAchieved,
    RetryBudgetExhausted,
)
from projclosure.domain.field import next_prime
from projclosure.domain.models import DegreeVector, RankTable
from projclosure.domain.seeds import derive_rng
from projclosure.io.instance_json import Instance
from projclosure.oracle.detideal import verify_initial
from projclosure.oracle.groebner import LexOrder
from projclosure.oracle.points import SectionCount, count_intersection_points
from projclosure.validate.validate_rank_table import validate_rank_table
from projclosure.verify.verdicts import CheckVerdict, Status, SuiteResult

log = logging.getLogger(__name__)

SUITES = ("groebner", "hilbert", "matroid", "pointcount")
TRICHOTOMY_LIMIT = 200
HILBERT_BOX = 4
Q_RAISES = 3


@dataclass(frozen=True)
class SuiteContext:
    seed: int = 0
    q: int = 101
    trials: int = 5
    budgets: Budgets = DEFAULT_BUDGETS


def _v(suite: str, check: str, ok: bool, details: str = "", **data: object) -> CheckVerdict:
    return CheckVerdict(suite, check, "PASS" if ok else "FAIL", details, dict(data))


def _abstain(suite: str, check: str, details: str, **data: object) -> CheckVerdict:
    return CheckVerdict(suite, check, "ABSTAIN", details, dict(data))


def _table_ok(t: RankTable) -> str | None:
    try:
        validate_rank_table(t)
    except AxiomViolation as e:
        return str(e)
    return None


def run_matroid(inst: Instance, ctx: SuiteContext) -> SuiteResult:
    t = inst.table
    try:
        validate_rank_table(t)
    except AxiomViolation as e:
        witness = {k: str(v) for k, v in e.context.items()}
        return SuiteResult("matroid", (CheckVerdict("matroid", "axioms", "FAIL", str(e), witness),))
    out = [_v("matroid", "axioms", True)]
    support = dimension_and_support(t)
    identity = check_matroid_identity(t)
    hat = sorted(widehat_M(t)) if support.p else []
    out.append(
        _v(
            "matroid",
            "tight_vectors_equal_support",
            identity,
            "vacuous at p=0" if support.p == 0 else "",
            p=support.p,
            widehat_size=len(hat),
            support_size=len(support.support),
        )
    )
    out.append(_v("matroid", "p_is_maximal", not enumerate_M(t, support.p + 1), p=support.p))
    return SuiteResult("matroid", tuple(out))


def _box(n: int) -> list[DegreeVector]:
    return [tuple(u) for u in itertools.product(range(HILBERT_BOX + 1), repeat=n)]


def run_hilbert(inst: Instance, ctx: SuiteContext) -> SuiteResult:
    t = inst.table
    b = ctx.budgets
    problem = _table_ok(t)
    if problem is not None:
        return SuiteResult("hilbert", (_abstain("hilbert", "rank_table", problem),))
    support = dimension_and_support(t)
    poly = hilbert_polynomial(support)
    ideal = initial_ideal(t)
    out: list[CheckVerdict] = []

    if len(support.support) <= b.naive_hilbert_limit:
        naive = hilbert_polynomial_naive(support)
        pairwise = hilbert_polynomial_pairwise(support.sorted_support())
        out.append(_v("hilbert", "collapsed_equals_naive", naive == poly))
        out.append(_v("hilbert", "collapsed_equals_pairwise", pairwise == poly))
    else:
        out.append(_abstain("hilbert", "collapsed_equals_naive", f"|M(p)|={len(support.support)} over the naive limit"))

    mismatches: list[dict[str, object]] = []
    try:
        for u in _box(t.n):
            hp, sm = evaluate(poly, u), standard_monomial_count(ideal, t, u, b)
            if hp != sm:
                mismatches.append({"u": list(u), "hilbert": hp, "standard": sm})
        out.append(
            _v("hilbert", "hilbert_equals_standard_count", not mismatches, box=HILBERT_BOX, mismatches=mismatches[:5])
        )
    except BudgetExceeded as e:
        out.append(_abstain("hilbert", "hilbert_equals_standard_count", str(e)))

    out.append(_v("hilbert", "leading_coefficients_indicate_support", is_multiplicity_free(poly, support)))

    try:
        via = initial_ideal_via_intersection(t, b)
        out.append(_v("hilbert", "initial_ideal_equals_intersection", via == ideal, generators=len(ideal.gens)))
    except BudgetExceeded as e:
        out.append(_abstain("hilbert", "initial_ideal_equals_intersection", str(e)))

    length = max_generator_length(ideal)
    out.append(_v("hilbert", "generator_length_bound", length <= min(t.r_plus_1, t.n), max_length=length))

    sizes = t.block_sizes()
    total = math.prod(s + 1 for s in sizes)
    if total <= TRICHOTOMY_LIMIT:
        bad = [m.render() for m in all_block_monomials(sizes) if is_member(m, ideal) != satisfies_generator_condition(t, m)]
        out.append(_v("hilbert", "membership_trichotomy", not bad, monomials=total, counterexamples=bad[:5]))
    else:
        out.append(_abstain("hilbert", "membership_trichotomy", f"{total} block monomials over {TRICHOTOMY_LIMIT}"))
    return SuiteResult("hilbert", tuple(out))


def run_groebner(inst: Instance, ctx: SuiteContext) -> SuiteResult:
    a = inst.arrangement
    if a is None:
        return SuiteResult("groebner", (_abstain("groebner", "initial_ideal", "matroid mode has no matrices"),))
    if not a.field.is_rational:
        return SuiteResult("groebner", (_abstain("groebner", "initial_ideal", "needs a rational arrangement"),))
    try:
        verdict = verify_initial(a, derive_rng(ctx.seed, "groebner"), ctx.budgets)
    except GenericityNotAchieved as e:
        return SuiteResult("groebner", (_abstain("groebner", "initial_ideal", str(e)),))
    order = LexOrder(inst.table.block_sizes())
    check = _v(
        "groebner",
        "initial_ideal",
        verdict.equal,
        "" if verdict.exhaustive_genericity else "genericity sampled (probabilistic)",
        leading=list(verdict.leading),
        expected=list(verdict.expected),
        attempts=verdict.attempts,
        minors=verdict.minor_count,
        basis_size=len(verdict.basis),
    )
    dump = {
        "minors": [p.render(order) for p in verdict.minors],
        "groebner_basis": [p.render(order) for p in verdict.basis],
    }
    return SuiteResult("groebner", (check,), dump=dump)


def _reduce(a: Arrangement, q: int, b: Budgets) -> tuple[Arrangement, int]:
    if a.field.is_rational:
        return good_prime_reduction(a, q, b)
    return a, a.field.q  # type: ignore[return-value]


def _count_verdict(counts: list[SectionCount], in_support: bool) -> tuple[Status, str]:
    if any(s.count > 1 for s in counts):
        return "FAIL", "count above 1"
    if in_support:
        ok = all(s.count == 1 for s in counts)
        return ("PASS" if ok else "FAIL"), ""
    certified = [s for s in counts if s.certified]
    if any(s.count != 0 for s in certified):
        return "FAIL", "certified empty section met the closure"
    if not certified:
        return "ABSTAIN", "no sampled section reached the emptiness target"
    return "PASS", ""


def run_pointcount(inst: Instance, ctx: SuiteContext) -> SuiteResult:
    a = inst.arrangement
    if a is None:
        return SuiteResult("pointcount", (_abstain("pointcount", "multidegree", "matroid mode has no subspaces"),))
    b = ctx.budgets
    t = inst.table
    support = dimension_and_support(t)
    arr, q = _reduce(a, ctx.q, b)
    out: list[CheckVerdict] = []
    for c in sorted(enumerate_D(t, support.p)):
        name = "c=" + ",".join(str(x) for x in c)
        in_support = c in support.support
        counts: list[SectionCount] = []
        abstain: str | None = None
        for trial in range(ctx.trials):
            raises = 0
            while True:
                try:
                    counts.append(count_intersection_points(arr, c, derive_rng(ctx.seed, f"pointcount:{name}:{trial}"), b))
                    break
                except RetryBudgetExhausted as e:
                    if not a.field.is_rational or raises == Q_RAISES:
                        abstain = str(e)
                        break
                    raises += 1
                    arr, q = _reduce(a, next_prime(q), b)
                    log.info("raising q to %d after genericity failures", q)
                except BudgetExceeded as e:
                    abstain = str(e)
                    break
            if abstain is not None:
                break
        data = {
            "c": list(c),
            "q": q,
            "in_support": in_support,
            "counts": [s.count for s in counts],
            "certified": [s.certified for s in counts],
            "retries": [s.retries for s in counts],
            "section_dims": counts[0].section_dims if counts else {},
        }
        if abstain is not None:
            out.append(_abstain("pointcount", name, abstain, **data))
            continue
        status, details = _count_verdict(counts, in_support)
        out.append(CheckVerdict("pointcount", name, status, details, data))
    return SuiteResult("pointcount", tuple(out))


_RUNNERS: dict[str, Callable[[Instance, SuiteContext], SuiteResult]] = {
    "groebner": run_groebner,
    "hilbert": run_hilbert,
    "matroid": run_matroid,
    "pointcount": run_pointcount,
}


def run_suite(name: str, inst: Instance, ctx: SuiteContext) -> SuiteResult:
    """Run one suite; a budget error ends it with an ABSTAIN record and the error kept."""
    try:
        return _RUNNERS[name](inst, ctx)
    except BudgetError as e:
        return SuiteResult(name, (_abstain(name, "budget", str(e)),), budget_error=str(e))

