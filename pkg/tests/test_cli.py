import json
import subprocess
import sys

from conftest import ROOT


def run_cli(*args, check=True):
    return subprocess.run(
        [sys.executable, "-m", "cli", *args],
        cwd=ROOT,
        check=check,
        capture_output=True,
        text=True,
    )


def records(result):
    return [json.loads(line) for line in result.stdout.splitlines() if line.strip()]


def test_eval_emits_one_json_line():
    (rec,) = records(run_cli("eval", "[3,2,2,7,2]"))
    assert rec["value"] == "81/35"
    assert rec["minimal_model"] == [3, 2, 2, 7, 2]
    assert rec["matrix"] is not None


def test_wahl_chain():
    (rec,) = records(run_cli("wahl", "chain", "3", "1"))
    assert rec["chain"] == [5, 2]
    assert rec["dual"] == [2, 2, 2, 3]


def test_marking_list_filters_by_degree():
    recs = records(run_cli("mark", "list", "29", "22", "--degree", "9"))
    assert len(recs) == 1
    assert recs[0]["degree"] == 9


def test_table_format_has_a_header():
    result = run_cli("--format", "table", "wahl", "chain", "2", "1")
    header = result.stdout.splitlines()[0].split()
    assert header[:3] == ["n", "a", "chain"]


def test_data_error_exits_with_1():
    result = run_cli("wahl", "chain", "4", "2", check=False)
    assert result.returncode == 1
    assert result.stdout == ""
    assert "NotCoprime" in result.stderr


def test_usage_error_exits_with_2():
    result = run_cli("wahl", check=False)
    assert result.returncode == 2


def test_classify_is_an_alias_of_list():
    census = records(run_cli("mark", "classify", "29", "22"))
    assert census == records(run_cli("mark", "list", "29", "22"))
    assert len(census) == 18
    assert len(records(run_cli("mark", "classify", "29", "22", "--strict"))) == 15


def test_zero_cf_assignments():
    (rec,) = records(run_cli("mark", "zerocf", "[2,2,2,3]", "--max-weight", "0"))
    assert rec["k"] == [2, 2, 1, 3]
    assert rec["weight"] == 0
    assert rec["decrements"] == [0, 0, 1, 0]
    result = run_cli("mark", "zerocf", "[2,2]", "--max-weight", "9", check=False)
    assert result.returncode == 1


def test_generate_writes_json_lines(tmp_path):
    out = tmp_path / "wahl.jsonl"
    (summary,) = records(run_cli("wahl", "gen", "--max-len", "3", "--out", str(out)))
    assert summary["count"] == 7
    lines = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert [r["chain"] for r in lines][0] == [4]
    assert len(lines) == 7


def test_flip_accepts_a_cyclic_quotient():
    by_cqs = records(run_cli("train", "flip", "11", "3", "--count", "3"))
    chains = [r["chain"] for r in records(run_cli("geo", "extremal", "11", "3"))]
    assert "[2/1]-(3)" in chains
    by_chain = [rec for c in chains for rec in records(run_cli("train", "flip", c, "--count", "3"))]
    assert by_cqs == by_chain


def test_what8_is_an_alias_of_deg8():
    args = ("29", "5", "[u{6},7,1,2,2,2,2,2,2]")
    assert records(run_cli("geo", "what8", *args)) == records(run_cli("geo", "deg8", *args))
