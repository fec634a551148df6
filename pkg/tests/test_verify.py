import json

from conftest import GOLDEN
from verify import AcceptanceVerifier


def test_quick_suite_passes():
    verifier = AcceptanceVerifier(quick=True)
    results = verifier.run_all_tests()
    failed = [r["test_name"] for r in results if not r["passed"]]
    assert failed == []
    assert AcceptanceVerifier.exit_code(results) == 0


def test_mutated_golden_fails_by_name(tmp_path):
    with open(GOLDEN, encoding="utf-8") as f:
        golden = json.load(f)
    golden["census"]["strict_count"] += 1
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(golden), encoding="utf-8")

    results = AcceptanceVerifier(quick=True, golden_path=path).run_all_tests()
    failed = [r for r in results if not r["passed"]]
    assert [r["test_name"] for r in failed] == ["Marking census"]
    bad = [d for d in failed[0]["details"] if not d.get("ok", True)]
    assert bad[0]["check"] == "strict count"
    assert AcceptanceVerifier.exit_code(results) == 1


def test_exit_code_prefers_internal_errors():
    results = [
        {"test_name": "a", "passed": False},
        {"test_name": "b", "passed": False, "internal": True},
    ]
    assert AcceptanceVerifier.exit_code(results) == 3
