"""
reports.py — Check results and their line / TSV renderings.

Implements:
  - CheckResult, the unit every battery and certificate check returns
  - `CHECK <name> <group> PASS|FAIL <certificate>` report lines
  - The machine-readable TSV twin (pandas)
  - Suite summary formatting (counts per group, notes)
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

import pandas as pd

logger = logging.getLogger(__name__)

TSV_COLUMNS = ["name", "group", "verdict", "certificate", "level"]


# ─── Results ─────────────────────────────────────────────────────────────────

@dataclass
class CheckResult:
    """One verdict with the finite witness that backs it."""

    name: str
    group: str
    passed: bool
    certificate: str = ""
    level: str = "INFO"                  # INFO | NOTE | FAIL

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    @property
    def key(self) -> str:
        return f"{self.group}/{self.name}"

    def __repr__(self) -> str:
        return f"CheckResult({self.verdict} {self.name} on {self.group}: {self.certificate[:60]})"


def passed(name: str, group: str, certificate: str = "", level: str = "INFO") -> CheckResult:
    return CheckResult(name, group, True, certificate, level)


def failed(name: str, group: str, certificate: str) -> CheckResult:
    return CheckResult(name, group, False, certificate, "FAIL")


# ─── Line Format ─────────────────────────────────────────────────────────────

def format_check_line(result: CheckResult) -> str:
    line = f"CHECK {result.name} {result.group} {result.verdict}"
    if result.certificate:
        line += f" {result.certificate}"
    return line


def write_report(results: Iterable[CheckResult], out: TextIO) -> None:
    for r in results:
        out.write(format_check_line(r) + "\n")


# ─── TSV Twin ────────────────────────────────────────────────────────────────

def report_frame(results: Iterable[CheckResult]) -> pd.DataFrame:
    rows = [
        {
            "name": r.name,
            "group": r.group,
            "verdict": r.verdict,
            "certificate": r.certificate,
            "level": r.level,
        }
        for r in results
    ]
    return pd.DataFrame(rows, columns=TSV_COLUMNS)


def write_tsv(results: Iterable[CheckResult], path: str) -> None:
    frame = report_frame(results)
    frame.to_csv(path, sep="\t", index=False)
    logger.info(f"TSV report written to {path} ({len(frame)} rows)")


# ─── Summary ─────────────────────────────────────────────────────────────────

def format_suite_summary(
    results: list[CheckResult],
    notes: Optional[dict[str, list[str]]] = None,
    regressions: Optional[list[str]] = None,
) -> str:
    """
    Human-readable digest of a suite run.

    Returns:
        Multi-line string: one line per group with pass/fail counts and
        notes, then the failing checks and any regressions.
    """
    notes = notes or {}
    if not results and not notes:
        return "Suite: no groups configured"

    frame = report_frame(results)
    lines = [f"Suite: {len(results)} checks, {int((frame['verdict'] == 'FAIL').sum())} failed"]
    groups = list(dict.fromkeys(list(frame["group"]) + list(notes)))
    for group in groups:
        rows = frame[frame["group"] == group]
        ok = int((rows["verdict"] == "PASS").sum())
        line = f"  {group}: {ok}/{len(rows)} pass"
        if notes.get(group):
            line += f" [{'; '.join(notes[group])}]"
        lines.append(line)

    failures = [r for r in results if not r.passed]
    if failures:
        lines.append("Failures:")
        lines.extend(f"  {format_check_line(r)}" for r in failures)
    if regressions:
        lines.append("Regressions since last run:")
        lines.extend(f"  {key}" for key in regressions)
    return "\n".join(lines)
