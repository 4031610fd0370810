"""Batch replay of diagnosis requests from a line-delimited log.

Each line is a JSON record {"task": ..., "prev": ..., "input": ...};
`prev` defaults to the task. Lines that fail to parse or diagnose are
counted under "error" and never abort the run. Timing wraps the
diagnosis computation only, not JSON or equation parsing.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError
from .syntax import parse_eqset
from .diagnosis import Correct, Deviation, Finished, NotEquivalent, diagnose_from_task

CLASS_KEYS = [
    "correct",
    "finished",
    "deviation-1",
    "deviation-2",
    "deviation-3",
    "not-equivalent",
    "unknown",
    "error",
]


def classify_key(diagnosis) -> str:
    if isinstance(diagnosis, Correct):
        return "correct"
    if isinstance(diagnosis, Finished):
        return "finished"
    if isinstance(diagnosis, Deviation):
        return f"deviation-{int(diagnosis.relation)}"
    if isinstance(diagnosis, NotEquivalent):
        return "not-equivalent"
    return "unknown"


@dataclass
class BatchReport:
    total: int = 0
    counts: dict[str, int] = field(default_factory=lambda: {k: 0 for k in CLASS_KEYS})
    timings_ms: list[float] = field(default_factory=list)

    def _percentile(self, q: float) -> float:
        if not self.timings_ms:
            return 0.0
        ordered = sorted(self.timings_ms)
        index = min(len(ordered) - 1, max(0, round(q * (len(ordered) - 1))))
        return ordered[index]

    def stats(self) -> dict:
        times = self.timings_ms
        return {
            "diagnosed": len(times),
            "mean_ms": sum(times) / len(times) if times else 0.0,
            "max_ms": max(times) if times else 0.0,
            "p50_ms": self._percentile(0.50),
            "p90_ms": self._percentile(0.90),
            "p99_ms": self._percentile(0.99),
        }

    def to_dict(self) -> dict:
        return {"total": self.total, "counts": dict(self.counts), "timing": self.stats()}

    def to_text(self) -> str:
        lines = [f"total requests: {self.total}"]
        for key in CLASS_KEYS:
            if self.counts[key]:
                lines.append(f"  {key:15} {self.counts[key]}")
        s = self.stats()
        lines.append(
            "timing: mean {mean_ms:.2f} ms | p50 {p50_ms:.2f} | p90 {p90_ms:.2f} "
            "| p99 {p99_ms:.2f} | max {max_ms:.2f}".format(**s)
        )
        return "\n".join(lines)


def batch_eval(log_path: str | Path, max_lookahead: int = 5) -> BatchReport:
    """Diagnose every record in the log; deterministic counts, non-fatal errors."""
    report = BatchReport()
    with Path(log_path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            report.total += 1
            try:
                record = json.loads(line)
                task = parse_eqset(record["task"])
                prev = parse_eqset(record.get("prev") or record["task"])
                inp = parse_eqset(record["input"])
                started = time.perf_counter()
                diagnosis = diagnose_from_task(task, prev, inp, max_lookahead)
                report.timings_ms.append((time.perf_counter() - started) * 1000.0)
            except (DomainError, KeyError, ValueError) as _:
                report.counts["error"] += 1
                continue
            report.counts[classify_key(diagnosis)] += 1
    return report
