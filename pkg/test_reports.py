"""Tests for reports.py and state_manager.py."""

import io
import json

import pandas as pd

from reports import (
    TSV_COLUMNS,
    failed,
    format_check_line,
    format_suite_summary,
    passed,
    report_frame,
    write_report,
    write_tsv,
)
from state_manager import (
    clear_state,
    find_regressions,
    get_state_summary,
    load_state,
    save_state,
    update_state,
)

RESULTS = [
    passed("orbit-stabilizer", "D5", "order=10"),
    failed("second-trans", "D5", "negative transporter (1,2)->(1,3) absent"),
    passed("bipartition", "Sym3"),
]


# ─── Report lines ────────────────────────────────────────────────────────────

def test_check_lines():
    assert format_check_line(RESULTS[0]) == "CHECK orbit-stabilizer D5 PASS order=10"
    assert format_check_line(RESULTS[2]) == "CHECK bipartition Sym3 PASS"
    out = io.StringIO()
    write_report(RESULTS, out)
    assert out.getvalue().splitlines()[1] == (
        "CHECK second-trans D5 FAIL negative transporter (1,2)->(1,3) absent"
    )
    assert RESULTS[1].level == "FAIL" and RESULTS[1].key == "D5/second-trans"


def test_tsv(tmp_path):
    frame = report_frame(RESULTS)
    assert list(frame.columns) == TSV_COLUMNS
    path = tmp_path / "r.tsv"
    write_tsv(RESULTS, str(path))
    back = pd.read_csv(path, sep="\t", keep_default_na=False)
    assert back["verdict"].tolist() == ["PASS", "FAIL", "PASS"]
    assert back["certificate"].tolist()[2] == ""


def test_summary():
    text = format_suite_summary(RESULTS, {"C5": ["U(F)+ trivial"]}, ["D5/second-trans"])
    lines = text.splitlines()
    assert lines[0] == "Suite: 3 checks, 1 failed"
    assert "  D5: 1/2 pass" in lines
    assert "  C5: 0/0 pass [U(F)+ trivial]" in lines
    assert lines[-1] == "  D5/second-trans"
    assert format_suite_summary([]) == "Suite: no groups configured"


# ─── State ledger ────────────────────────────────────────────────────────────

def test_state_round_trip(tmp_path):
    path = str(tmp_path / "state.json")
    assert load_state(path) == {}
    state = update_state({}, RESULTS, seed=3)
    assert save_state(path, state)
    loaded = load_state(path)
    assert loaded["checks"]["D5/second-trans"] == "FAIL"
    assert loaded["seed"] == 3
    assert "Checks: 3 (1 failing)" in get_state_summary(loaded)
    assert clear_state(path)
    assert load_state(path) == {}


def test_corrupt_state_starts_fresh(tmp_path):
    path = tmp_path / "state.json"
    path.write_text("{not json")
    assert load_state(str(path)) == {}
    path.write_text(json.dumps([1, 2]))
    assert load_state(str(path)) == {}


def test_regressions():
    before = update_state({}, [passed("second-trans", "D5"), passed("bipartition", "Sym3")], seed=1)
    assert find_regressions(before, RESULTS) == ["D5/second-trans"]
    assert find_regressions({}, RESULTS) == []
