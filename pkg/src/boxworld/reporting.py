"""Shared verification report structures and renderers.

Every verifier produces a Report: an ordered list of CheckRecords plus a
deterministic work counter. The machine rendering is line-delimited JSON
with fields (command, instance, verdict, witness?, timing); timing is the
record's deterministic work count, never wall-clock, so repeated runs are
byte-identical. The human rendering summarizes counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckRecord:
    check: str
    instance: str
    verdict: str  # "pass" | "fail" | "info" | "partial"
    witness: str | None = None
    work: int = 1


@dataclass
class Report:
    name: str
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, check: str, instance: str, ok: bool, witness: str | None = None, work: int = 1):
        self.records.append(
            CheckRecord(check, instance, "pass" if ok else "fail", witness, work)
        )

    def info(self, check: str, instance: str, witness: str | None = None, work: int = 1):
        self.records.append(CheckRecord(check, instance, "info", witness, work))

    def mark_partial(self, reason: str):
        self.records.append(CheckRecord(self.name, "partial", "partial", reason, 0))

    def extend(self, other: "Report"):
        self.records.extend(other.records)

    @property
    def passed(self) -> bool:
        return all(r.verdict != "fail" for r in self.records)

    @property
    def partial(self) -> bool:
        return any(r.verdict == "partial" for r in self.records)

    @property
    def work(self) -> int:
        return sum(r.work for r in self.records)

    def counts(self) -> tuple[int, int]:
        n_pass = sum(1 for r in self.records if r.verdict == "pass")
        n_fail = sum(1 for r in self.records if r.verdict == "fail")
        return n_pass, n_fail

    def summary(self) -> str:
        n_pass, n_fail = self.counts()
        status = "PARTIAL" if self.partial else ("PASS" if self.passed else "FAIL")
        return f"{self.name}: {n_pass} passed, {n_fail} failed [{status}]"


def machine_lines(command: str, report: Report) -> list[str]:
    """Deterministic line-delimited JSON records, one per check plus a summary."""
    lines = []
    for r in report.records:
        entry = {
            "command": command,
            "instance": f"{r.check}: {r.instance}" if r.check != command else r.instance,
            "verdict": r.verdict,
            "timing": r.work,
        }
        if r.witness is not None:
            entry["witness"] = r.witness
        lines.append(json.dumps(entry, sort_keys=True, separators=(",", ":")))
    n_pass, n_fail = report.counts()
    status = "partial" if report.partial else ("pass" if report.passed else "fail")
    summary = {
        "command": command,
        "instance": "summary",
        "verdict": status,
        "witness": f"pass={n_pass} fail={n_fail}",
        "timing": report.work,
    }
    lines.append(json.dumps(summary, sort_keys=True, separators=(",", ":")))
    return lines


def human_lines(command: str, report: Report, elapsed: float | None = None) -> list[str]:
    lines = [f"== {command} =="]
    for r in report.records:
        mark = {"pass": "ok  ", "fail": "FAIL", "info": "info", "partial": "PART"}[r.verdict]
        line = f"[{mark}] {r.check}: {r.instance}"
        if r.witness is not None:
            line += f"  ({r.witness})"
        lines.append(line)
    lines.append(report.summary())
    if elapsed is not None:
        lines.append(f"elapsed: {elapsed:.2f}s")
    return lines
