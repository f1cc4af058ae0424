from __future__ import annotations

import argparse
import logging
import sys
import time
import traceback
from dataclasses import replace
from pathlib import Path
from typing import Any

from projclosure.audit.audit_log import AuditLogger
from projclosure.audit.checksums import sha256_file
from projclosure.calc.arrangement import rank_table
from projclosure.calc.degrees import dimension_and_support
from projclosure.calc.generate import random_arrangement
from projclosure.calc.hilbert import hilbert_polynomial, is_multiplicity_free
from projclosure.calc.monomial import initial_ideal
from projclosure.domain.config import DEFAULT_BUDGETS, Budgets
from projclosure.domain.errors import BudgetError, ProjClosureError
from projclosure.domain.field import FieldSpec, is_prime
from projclosure.domain.seeds import derive_rng
from projclosure.io.instance_json import Instance, read_instance, write_instance_json
from projclosure.io.outputs import (
    analysis_document,
    render_analysis,
    render_verification,
    verify_document,
    write_ideal_dump,
    write_report_json,
)
from projclosure.validate.validate_arrangement import validate_arrangement
from projclosure.validate.validate_rank_table import validate_rank_table
from projclosure.verify.suites import SUITES, SuiteContext, run_suite
from projclosure.verify.verdicts import tally

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3


def _error_payload(e: BaseException) -> dict[str, Any]:
    """Audit form of an error: its code, message, context and the frame that raised it."""
    code = e.code if isinstance(e, ProjClosureError) else type(e).__name__
    payload: dict[str, Any] = {"code": code, "message": str(e)}
    if isinstance(e, ProjClosureError) and e.context:
        payload["context"] = {k: str(v) for k, v in e.context.items()}
    frames = traceback.extract_tb(e.__traceback__)
    if frames:
        last = frames[-1]
        payload["where"] = f"{Path(last.filename).name}:{last.lineno} in {last.name}"
    return payload


def _field_arg(s: str) -> FieldSpec:
    if s == "rational":
        return FieldSpec.rational()
    kind, _, q = s.partition(":")
    try:
        if kind == "prime":
            return FieldSpec.prime(int(q))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid field: {s}") from e
    raise argparse.ArgumentTypeError(f"invalid field: {s} (rational or prime:Q)")


def _dims_arg(s: str) -> list[int]:
    try:
        dims = [int(x) for x in s.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid dims: {s}") from e
    if not dims or any(d < 0 for d in dims):
        raise argparse.ArgumentTypeError(f"invalid dims: {s}")
    return dims


def _prime_arg(s: str) -> int:
    try:
        q = int(s)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid prime: {s}") from e
    if q < 3 or not is_prime(q):
        raise argparse.ArgumentTypeError(f"not an odd prime: {s}")
    return q


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid count: {s}") from e
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {s}")
    return v


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--height", type=_positive, default=None, help="random entry height over Q")
    p.add_argument("--retries", type=_positive, default=None, help="resampling budget")
    p.add_argument("--point-budget", type=_positive, default=None)
    p.add_argument("--max-variables", type=_positive, default=None)


def _budgets(args: argparse.Namespace) -> Budgets:
    overrides = {
        "random_height": args.height,
        "retry_budget": args.retries,
        "point_budget": args.point_budget,
        "max_variables": args.max_variables,
    }
    return replace(DEFAULT_BUDGETS, **{k: v for k, v in overrides.items() if v is not None})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projclosure")
    p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="Dimension, multidegree support, initial ideal and Hilbert polynomial")
    an.add_argument("file")
    an.add_argument("--json", default=None, help="write the report document here")
    an.add_argument("--audit", default=None, help="append JSONL run events here")

    ve = sub.add_parser("verify", help="Cross-check the formulas against independent oracles")
    ve.add_argument("file")
    ve.add_argument("--which", choices=[*SUITES, "all"], default="all")
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument(
        "--q",
        type=_prime_arg,
        default=101,
        help="prime for point counts; larger sections need a small prime such as 11 to stay within --point-budget",
    )
    ve.add_argument("--trials", type=_positive, default=5)
    ve.add_argument("--json", default=None)
    ve.add_argument("--audit", default=None)
    ve.add_argument("--dump-ideal", default=None, help="write minors and Groebner basis, one polynomial per line")
    _add_budget_flags(ve)

    ge = sub.add_parser("gen", help="Write a random valid arrangement")
    ge.add_argument("--ambient", type=_positive, required=True)
    ge.add_argument("--dims", type=_dims_arg, required=True)
    ge.add_argument("--field", type=_field_arg, default=FieldSpec.rational())
    ge.add_argument("--seed", type=int, default=0)
    ge.add_argument("-o", "--output", required=True)
    _add_budget_flags(ge)
    return p


def _load(path: str, *, table_axioms: bool) -> Instance:
    inst = read_instance(Path(path))
    if inst.arrangement is not None:
        validate_arrangement(inst.arrangement)
    if table_axioms:
        validate_rank_table(inst.table)
    return inst


def _input_error(audit: AuditLogger, e: BaseException) -> int:
    audit.log_event("INPUT_ERROR", _error_payload(e))
    print(f"error: {e}", file=sys.stderr)
    return EXIT_INPUT_ERROR


def _budget_error(audit: AuditLogger, e: BudgetError) -> int:
    audit.log_event("BUDGET_EXCEEDED", _error_payload(e))
    print(f"error: {e}", file=sys.stderr)
    return EXIT_BUDGET


def cmd_analyze(args: argparse.Namespace) -> int:
    audit = AuditLogger(args.audit, "analyze")
    audit.log_event("RUN_STARTED", {"file": args.file})
    try:
        inst = _load(args.file, table_axioms=True)
        digest = sha256_file(args.file)
    except BudgetError as e:
        return _budget_error(audit, e)
    except (ValueError, OSError) as e:
        return _input_error(audit, e)

    try:
        support = dimension_and_support(inst.table)
        ideal = initial_ideal(inst.table)
        poly = hilbert_polynomial(support)
    except BudgetError as e:
        return _budget_error(audit, e)

    doc = analysis_document(
        sha256=digest,
        mode=inst.mode,
        field_label=inst.field.label,
        table=inst.table,
        support=support,
        ideal=ideal,
        poly=poly,
        multiplicity_free=is_multiplicity_free(poly, support),
    )
    print(render_analysis(doc))
    if args.json:
        write_report_json(args.json, doc)
    audit.log_event("RUN_FINISHED", {"status": "PASS", "exit_code": EXIT_PASS})
    return EXIT_PASS


def cmd_verify(args: argparse.Namespace) -> int:
    audit = AuditLogger(args.audit, "verify")
    audit.log_event("RUN_STARTED", {"file": args.file, "which": args.which, "seed": args.seed})
    try:
        # rank-table axioms are the matroid suite's first check
        inst = _load(args.file, table_axioms=False)
        digest = sha256_file(args.file)
    except BudgetError as e:
        return _budget_error(audit, e)
    except (ValueError, OSError) as e:
        return _input_error(audit, e)

    ctx = SuiteContext(seed=args.seed, q=args.q, trials=args.trials, budgets=_budgets(args))
    names = SUITES if args.which == "all" else (args.which,)
    results = []
    for name in sorted(names):
        started = time.perf_counter()
        result = run_suite(name, inst, ctx)
        audit.log_event(
            "SUITE_FINISHED",
            {"suite": name, "elapsed_s": round(time.perf_counter() - started, 6), "tally": tally(result.verdicts)},
        )
        if result.budget_error:
            audit.log_event("BUDGET_EXCEEDED", {"suite": name, "error": result.budget_error})
        results.append(result)

    if any(r.failed for r in results):
        status, code = "FAIL", EXIT_FAIL
    elif any(r.budget_error for r in results):
        status, code = "BUDGET_EXCEEDED", EXIT_BUDGET
    else:
        status, code = "PASS", EXIT_PASS

    doc = verify_document(
        sha256=digest,
        mode=inst.mode,
        which=args.which,
        seed=args.seed,
        q=args.q,
        trials=args.trials,
        results=results,
        status=status,
        exit_code=code,
    )
    print(render_verification(doc))
    if args.json:
        write_report_json(args.json, doc)
    if args.dump_ideal:
        sections = {k: v for r in results for k, v in r.dump.items()}
        write_ideal_dump(args.dump_ideal, sections)
    audit.log_event("RUN_FINISHED", {"status": status, "exit_code": code})
    return code


def cmd_gen(args: argparse.Namespace) -> int:
    audit = AuditLogger(None, "gen")
    budgets = _budgets(args)
    try:
        a = random_arrangement(args.field, args.ambient, args.dims, derive_rng(args.seed, "gen"), budgets)
    except BudgetError as e:
        return _budget_error(audit, e)
    except ValueError as e:
        return _input_error(audit, e)
    write_instance_json(args.output, Instance(a.field, a.ambient_dim, rank_table(a, budgets), a))
    print(f"wrote {args.output}")
    return EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "analyze":
        return cmd_analyze(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "gen":
        return cmd_gen(args)
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
