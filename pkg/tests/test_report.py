import json

import pytest

from hopf_cohomology.exceptions import CheckFailure, GoldenMismatch
from hopf_cohomology.report import (
    CheckResult,
    canonical_json,
    require_golden,
    structural_diff,
    write_csv,
    write_json,
)

REPORT = {
    "spec": "sweedler",
    "entries": [
        {"g": "1", "h": "1", "n": 0, "degree": [0], "dim": 1},
        {"g": "x", "h": "1", "n": 1, "degree": [1], "dim": 1},
    ],
}


def test_canonical_json_is_sorted():
    text = canonical_json({"b": 1, "a": [1, 2]})
    assert text == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_structural_diff_names_paths():
    changed = json.loads(json.dumps(REPORT))
    changed["entries"][1]["dim"] = 2
    changed["method"] = "path"
    changed["entries"].append({})
    assert structural_diff(REPORT, changed) == ["$.entries[1].dim", "$.entries[2]", "$.method"]
    assert structural_diff(REPORT, REPORT) == []


def test_write_json_to_stdout(capsys):
    text = write_json(REPORT, "-")
    assert capsys.readouterr().out == text
    assert json.loads(text) == REPORT


def test_write_csv_rows(tmp_path):
    path = tmp_path / "report.csv"
    write_csv(REPORT, str(path))
    assert path.read_text().splitlines() == [
        "spec,g,h,n,degree,dim",
        "sweedler,1,1,0,0,1",
        "sweedler,x,1,1,1,1",
    ]


def test_golden_comparison(tmp_path):
    golden = tmp_path / "nested" / "golden.json"
    write_json(REPORT, str(golden))
    assert require_golden(REPORT, str(golden)) == []
    other = dict(REPORT, spec="taft")
    with pytest.raises(GoldenMismatch) as excinfo:
        require_golden(other, str(golden))
    assert excinfo.value.paths == ["$.spec"]
    assert excinfo.value.exit_code == 5


def test_check_result():
    ok = CheckResult("pp0")
    assert ok and ok.to_json() == {"check": "pp0", "ok": True}
    bad = CheckResult.failed("leibniz", "x=1", samples=3)
    assert not bad
    assert bad.to_json()["details"] == {"samples": 3}
    with pytest.raises(CheckFailure, match="leibniz"):
        bad.raise_for_failure()
