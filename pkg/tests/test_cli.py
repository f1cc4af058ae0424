from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import projclosure.cli as cli
from projclosure.domain.errors import ParseError
from projclosure.io.instance_json import parse_instance, read_instance

from conftest import DATA, ROOT, SRC


def _data(name: str) -> str:
    return str(DATA / name)


def _json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def test_analyze_planes_and_line(tmp_path: Path, capsys) -> None:
    out = tmp_path / "report.json"
    rc = cli.main(["analyze", _data("planes_and_line.json"), "--json", str(out)])
    assert rc == cli.EXIT_PASS
    doc = _json(out)
    assert doc["mode"] == "arrangement"
    assert doc["p"] == 4
    assert len(doc["support"]) == 7
    assert [2, 2, 0] not in doc["support"]
    assert len(doc["initial_ideal"]) == 6
    assert doc["multiplicity_free"] is True
    assert doc["rank_table"]["1,2"] == 1
    assert "p = 4" in capsys.readouterr().out


def test_analyze_report_is_deterministic(tmp_path: Path) -> None:
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["analyze", _data("camera.json"), "--json", str(a)]) == 0
    assert cli.main(["analyze", _data("camera.json"), "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"}\n")
    doc = _json(a)
    assert doc["hilbert_polynomial"]["terms"] == [
        {"coeff": -1, "ell": [1, 1]},
        {"coeff": 1, "ell": [1, 2]},
        {"coeff": 1, "ell": [2, 1]},
    ]


def test_analyze_matroid_mode(tmp_path: Path) -> None:
    out = tmp_path / "report.json"
    assert cli.main(["analyze", _data("camera_table.json"), "--json", str(out)]) == 0
    doc = _json(out)
    assert doc["mode"] == "matroid"
    assert doc["initial_ideal"] == ["x[1,1]*x[2,1]"]
    realized = tmp_path / "realized.json"
    assert cli.main(["analyze", _data("camera.json"), "--json", str(realized)]) == 0
    other = _json(realized)
    assert other["rank_table_sha256"] == doc["rank_table_sha256"]
    assert other["input_sha256"] != doc["input_sha256"]


def test_analyze_rejects_corrupted_table(tmp_path: Path) -> None:
    audit = tmp_path / "audit.jsonl"
    rc = cli.main(["analyze", _data("corrupted_table.json"), "--audit", str(audit)])
    assert rc == cli.EXIT_INPUT_ERROR
    records = [json.loads(line) for line in audit.read_text(encoding="utf-8").splitlines()]
    assert [r["event"] for r in records] == ["RUN_STARTED", "INPUT_ERROR"]
    payload = records[-1]["payload"]
    assert payload["code"] == "AXIOM_VIOLATION"
    assert payload["context"] == {"I": "1", "J": "1,2"}
    assert payload["where"].startswith("validate_rank_table.py:")


@pytest.mark.parametrize(
    "body",
    [
        "{not json",
        "[]",
        '{"field": {"type": "rational"}, "ambient_dim": 3}',
        '{"field": {"type": "prime", "q": 4}, "ambient_dim": 2, "subspaces": [[]]}',
        '{"field": {"type": "rational"}, "ambient_dim": 2, "subspaces": [[["1", "x"]]]}',
        '{"field": {"type": "rational"}, "ambient_dim": 2, "subspaces": [[["1"]]]}',
        '{"field": {"type": "rational"}, "ambient_dim": 2, "subspaces": [[["1", "0"]], [["1", "0"]]]}',
    ],
)
def test_bad_inputs_exit_2(tmp_path: Path, body: str) -> None:
    path = tmp_path / "bad.json"
    path.write_text(body, encoding="utf-8")
    assert cli.main(["analyze", str(path)]) == cli.EXIT_INPUT_ERROR


def test_missing_file_exit_2(tmp_path: Path) -> None:
    assert cli.main(["analyze", str(tmp_path / "nope.json")]) == cli.EXIT_INPUT_ERROR


def test_parse_errors_name_the_field() -> None:
    with pytest.raises(ParseError) as err:
        parse_instance('{"field": {"type": "rational"}, "ambient_dim": 2, "subspaces": [[["1", "x"]]]}')
    assert err.value.context["field"] == "subspaces[0][0][1]"
    with pytest.raises(ParseError) as err:
        parse_instance('{"field": {"type": "rational"},\n "ambient_dim": }')
    assert err.value.context["line"] == 2


def test_instance_files_parse() -> None:
    pts = read_instance(DATA / "three_points.json")
    assert pts.table.block_sizes() == (2, 2, 2)
    ident = read_instance(DATA / "identity.json")
    assert ident.table.as_mapping() == {"1": 0}
    table = read_instance(DATA / "camera_table.json")
    assert table.arrangement is None and table.table.abstract


def test_verify_camera_passes(tmp_path: Path) -> None:
    out, dump, audit = tmp_path / "v.json", tmp_path / "ideal.txt", tmp_path / "audit.jsonl"
    rc = cli.main(
        ["verify", _data("camera.json"), "--trials", "2", "--json", str(out), "--dump-ideal", str(dump), "--audit", str(audit)]
    )
    assert rc == cli.EXIT_PASS
    doc = _json(out)
    assert doc["status"] == "PASS"
    assert doc["summary"]["FAIL"] == 0
    assert sorted(doc["suites"]) == ["groebner", "hilbert", "matroid", "pointcount"]
    text = dump.read_text(encoding="utf-8")
    assert text.startswith("# groebner_basis\n")
    assert "# minors\n" in text
    records = [json.loads(line) for line in audit.read_text(encoding="utf-8").splitlines()]
    assert [r["event"] for r in records].count("SUITE_FINISHED") == 4
    assert records[-1]["payload"] == {"status": "PASS", "exit_code": 0}
    assert "elapsed_s" not in out.read_text(encoding="utf-8")


def test_verify_corrupted_table_fails(tmp_path: Path) -> None:
    out = tmp_path / "v.json"
    rc = cli.main(["verify", _data("corrupted_table.json"), "--which", "matroid", "--json", str(out)])
    assert rc == cli.EXIT_FAIL
    doc = _json(out)
    assert doc["status"] == "FAIL"
    assert doc["suites"]["matroid"]["checks"][0]["status"] == "FAIL"


def test_verify_matroid_mode_abstains_on_matrix_suites(tmp_path: Path) -> None:
    out = tmp_path / "v.json"
    assert cli.main(["verify", _data("camera_table.json"), "--which", "groebner", "--json", str(out)]) == 0
    assert _json(out)["summary"] == {"PASS": 0, "FAIL": 0, "ABSTAIN": 1}


def test_verify_report_is_deterministic(tmp_path: Path) -> None:
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert cli.main(["verify", _data("camera.json"), "--seed", "42", "--trials", "2", "--json", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert _json(a)["seed"] == 42


def test_pointcount_needs_a_small_prime_for_large_sections(tmp_path: Path) -> None:
    out = tmp_path / "v.json"
    base = ["verify", _data("planes_and_line.json"), "--which", "pointcount", "--trials", "1", "--json", str(out)]
    assert cli.main(base) == cli.EXIT_PASS
    assert _json(out)["summary"] == {"PASS": 0, "FAIL": 0, "ABSTAIN": 8}
    assert cli.main([*base, "--q", "11"]) == cli.EXIT_PASS
    summary = _json(out)["summary"]
    # the one degree outside the support may abstain on a single trial
    assert summary["FAIL"] == 0 and summary["PASS"] >= 7


def test_verify_budget_exit_3() -> None:
    rc = cli.main(["verify", _data("camera.json"), "--which", "groebner", "--max-variables", "2"])
    assert rc == cli.EXIT_BUDGET


def test_verify_rejects_bad_prime() -> None:
    with pytest.raises(SystemExit) as err:
        cli.main(["verify", _data("camera.json"), "--q", "4"])
    assert err.value.code == 2


def test_gen_round_trip(tmp_path: Path) -> None:
    inst = tmp_path / "gen.json"
    assert cli.main(["gen", "--ambient", "4", "--dims", "1,1", "--seed", "3", "-o", str(inst)]) == 0
    again = tmp_path / "gen2.json"
    assert cli.main(["gen", "--ambient", "4", "--dims", "1,1", "--seed", "3", "-o", str(again)]) == 0
    assert inst.read_bytes() == again.read_bytes()
    out = tmp_path / "report.json"
    assert cli.main(["analyze", str(inst), "--json", str(out)]) == 0
    doc = _json(out)
    assert doc["p"] == 3
    assert doc["initial_ideal"] == ["x[1,1]*x[2,1]"]


def test_gen_over_prime_field(tmp_path: Path) -> None:
    inst = tmp_path / "gen.json"
    assert cli.main(["gen", "--ambient", "5", "--dims", "2,2,1", "--field", "prime:101", "-o", str(inst)]) == 0
    assert _json(inst)["field"] == {"type": "prime", "q": 101}
    assert read_instance(inst).table.as_mapping()["1,2"] == 0


def test_gen_impossible_request_exit_3(tmp_path: Path) -> None:
    rc = cli.main(["gen", "--ambient", "2", "--dims", "2,2", "--retries", "3", "-o", str(tmp_path / "x.json")])
    assert rc == cli.EXIT_BUDGET
    assert not (tmp_path / "x.json").exists()


def test_gen_dimension_too_large_exit_2(tmp_path: Path) -> None:
    assert cli.main(["gen", "--ambient", "3", "--dims", "4", "-o", str(tmp_path / "x.json")]) == cli.EXIT_INPUT_ERROR


def test_module_entry_point() -> None:
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SRC) + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "projclosure.cli", "analyze", _data("camera.json")],
        cwd=ROOT,
        env=env,
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert "p = 3" in proc.stdout
