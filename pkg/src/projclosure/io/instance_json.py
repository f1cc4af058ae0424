from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

from projclosure.calc.arrangement import Arrangement, rank_table
from projclosure.calc.linalg import Subspace
from projclosure.domain.errors import ParseError
from projclosure.domain.field import FieldSpec
from projclosure.domain.models import RankTable

Mode = Literal["arrangement", "matroid"]


@dataclass(frozen=True, slots=True)
class Instance:
    """A parsed instance file: a concrete arrangement, or an abstract rank table (matroid mode)."""

    field: FieldSpec
    ambient_dim: int
    table: RankTable
    arrangement: Arrangement | None = None

    @property
    def mode(self) -> Mode:
        return "arrangement" if self.arrangement is not None else "matroid"


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _read_field(doc: dict[str, Any]) -> FieldSpec:
    spec = doc.get("field")
    if not isinstance(spec, dict):
        raise ParseError("field: expected an object", field="field")
    kind = spec.get("type")
    if kind == "rational":
        return FieldSpec.rational()
    if kind == "prime":
        q = spec.get("q")
        if not _is_int(q):
            raise ParseError("field.q: expected an integer", field="field.q")
        try:
            return FieldSpec.prime(q)
        except ValueError as e:
            raise ParseError(f"field.q: {e}", field="field.q") from e
    raise ParseError(f"field.type: unknown {kind!r}", field="field.type")


def _read_subspaces(raw: Any, f: FieldSpec, ambient: int) -> list[Subspace]:
    if not isinstance(raw, list) or not raw:
        raise ParseError("subspaces: expected a nonempty list", field="subspaces")
    out: list[Subspace] = []
    for i, basis in enumerate(raw):
        where = f"subspaces[{i}]"
        if not isinstance(basis, list):
            raise ParseError(f"{where}: expected a list of rows", field=where)
        rows = []
        for j, row in enumerate(basis):
            if not isinstance(row, list) or len(row) != ambient:
                raise ParseError(f"{where}[{j}]: expected {ambient} entries", field=f"{where}[{j}]")
            coerced = []
            for k, x in enumerate(row):
                at = f"{where}[{j}][{k}]"
                if isinstance(x, str):
                    try:
                        coerced.append(f.parse(x))
                    except ValueError as e:
                        raise ParseError(f"{at}: {e}", field=at) from e
                elif _is_int(x):
                    coerced.append(f.coerce(x))
                else:
                    raise ParseError(f"{at}: scalars are strings or integers", field=at)
            rows.append(coerced)
        out.append(Subspace.span(f, ambient, rows))
    return out


def _read_table(doc: dict[str, Any], ambient: int) -> RankTable:
    n = doc.get("n")
    if not _is_int(n) or n < 1:
        raise ParseError("n: expected a positive integer alongside rank_table", field="n")
    raw = doc["rank_table"]
    if not isinstance(raw, dict):
        raise ParseError("rank_table: expected an object", field="rank_table")
    for key, d in raw.items():
        if not _is_int(d):
            raise ParseError(f"rank_table[{key!r}]: expected an integer", field=f"rank_table.{key}")
    try:
        return RankTable.from_mapping(n, ambient, raw, abstract=True)
    except ValueError as e:
        raise ParseError(f"rank_table: {e}", field="rank_table") from e


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}: {e.msg}", line=e.lineno, column=e.colno) from e
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object at top level")
    f = _read_field(doc)
    ambient = doc.get("ambient_dim")
    if not _is_int(ambient) or ambient < 1:
        raise ParseError("ambient_dim: expected a positive integer", field="ambient_dim")
    has_subs, has_table = "subspaces" in doc, "rank_table" in doc
    if has_subs == has_table:
        raise ParseError("exactly one of subspaces and rank_table must be present")
    if has_table:
        return Instance(f, ambient, _read_table(doc, ambient))
    a = Arrangement(f, ambient, tuple(_read_subspaces(doc["subspaces"], f, ambient)))
    return Instance(f, ambient, rank_table(a), a)


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def instance_document(inst: Instance) -> dict[str, Any]:
    f = inst.field
    doc: dict[str, Any] = {
        "field": {"type": "rational"} if f.is_rational else {"type": "prime", "q": f.q},
        "ambient_dim": inst.ambient_dim,
    }
    if inst.arrangement is not None:
        doc["subspaces"] = [s.render() for s in inst.arrangement.subspaces]
    else:
        doc["n"] = inst.table.n
        doc["rank_table"] = inst.table.as_mapping()
    return doc


def write_instance_json(path: str | Path, inst: Instance) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as fh:
        json.dump(instance_document(inst), fh, indent=2, sort_keys=True)
        fh.write("\n")
