from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Sequence

from projclosure.audit.checksums import rank_table_digest
from projclosure.domain.models import BlockMonomialIdeal, MultidegreeSupport, MultiHilbertPoly, RankTable
from projclosure.verify.verdicts import SuiteResult, tally


def analysis_document(
    *,
    sha256: str,
    mode: str,
    field_label: str,
    table: RankTable,
    support: MultidegreeSupport,
    ideal: BlockMonomialIdeal,
    poly: MultiHilbertPoly,
    multiplicity_free: bool,
) -> dict[str, Any]:
    return {
        "input_sha256": sha256,
        "mode": mode,
        "field": field_label,
        "ambient_dim": table.r_plus_1,
        "n": table.n,
        "rank_table": table.as_mapping(),
        "rank_table_sha256": rank_table_digest(table),
        "p": support.p,
        "support": [list(m) for m in support.sorted_support()],
        "initial_ideal": ideal.render(),
        "hilbert_polynomial": {
            "terms": [{"coeff": t.coeff, "ell": list(t.ell)} for t in poly.terms],
            "text": poly.render(),
        },
        "multiplicity_free": multiplicity_free,
    }


def verify_document(
    *,
    sha256: str,
    mode: str,
    which: str,
    seed: int,
    q: int,
    trials: int,
    results: Sequence[SuiteResult],
    status: str,
    exit_code: int,
) -> dict[str, Any]:
    suites: dict[str, Any] = {}
    for r in sorted(results, key=lambda r: r.name):
        suites[r.name] = {
            "checks": [v.as_record() for v in r.verdicts],
            "budget_error": r.budget_error,
        }
    return {
        "input_sha256": sha256,
        "mode": mode,
        "which": which,
        "seed": seed,
        "q": q,
        "trials": trials,
        "suites": suites,
        "summary": tally(v for r in results for v in r.verdicts),
        "status": status,
        "exit_code": exit_code,
    }


def render_analysis(doc: Mapping[str, Any]) -> str:
    lines = [
        f"mode: {doc['mode']}  field: {doc['field']}  ambient: {doc['ambient_dim']}  n: {doc['n']}",
        f"p = {doc['p']}",
        f"M(p) ({len(doc['support'])}): " + " ".join("(" + ",".join(map(str, m)) + ")" for m in doc["support"]),
        "I_o = <" + ", ".join(doc["initial_ideal"]) + ">",
        "HP = " + doc["hilbert_polynomial"]["text"],
        f"multiplicity free: {'yes' if doc['multiplicity_free'] else 'no'}",
    ]
    return "\n".join(lines)


def render_verification(doc: Mapping[str, Any]) -> str:
    lines: list[str] = []
    for name, suite in doc["suites"].items():
        for check in suite["checks"]:
            extra = f"  ({check['details']})" if check["details"] else ""
            lines.append(f"{check['status']:<8}{name}.{check['check']}{extra}")
    s = doc["summary"]
    lines.append(f"{doc['status']}: {s['PASS']} pass, {s['FAIL']} fail, {s['ABSTAIN']} abstain")
    return "\n".join(lines)


def write_report_json(path: str | Path, doc: Mapping[str, Any]) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def write_ideal_dump(path: str | Path, sections: Mapping[str, Sequence[str]]) -> None:
    """One polynomial per line, each section headed by a `# name` line."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as f:
        for name in sorted(sections):
            f.write(f"# {name}\n")
            for line in sections[name]:
                f.write(line)
                f.write("\n")
