"""Pass/fail records for identity checks."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

REPORT_SCHEMA = "nerveforms-report-1"

CheckResult = Union[bool, Tuple[bool, Optional[str]], Tuple[bool, Optional[str], str]]


@dataclass
class Entry:
    id: str
    passed: bool
    residual: Optional[str] = None
    note: str = ""
    wall_ms: float = 0.0


@dataclass
class VerificationReport:
    suite: str
    seed: Optional[int] = None
    engine_version: str = ""
    entries: List[Entry] = field(default_factory=list)

    def __post_init__(self):
        if not self.engine_version:
            from . import ENGINE_VERSION

            self.engine_version = ENGINE_VERSION

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, id: str, passed: bool, residual: Optional[str] = None, note: str = "",
            wall_ms: float = 0.0) -> Entry:
        e = Entry(id, bool(passed), residual, note, wall_ms)
        self.entries.append(e)
        return e

    def run(self, id: str, fn: Callable[[], CheckResult]) -> Entry:
        """Time ``fn`` and record its result; exceptions count as failures."""
        start = time.perf_counter()
        try:
            res = fn()
        except Exception as exc:  # a crash is a failed identity, not a crashed suite
            res = (False, None, f"{type(exc).__name__}: {exc}")
        ms = (time.perf_counter() - start) * 1000
        if isinstance(res, bool):
            res = (res,)
        passed = res[0]
        residual = res[1] if len(res) > 1 else None
        note = res[2] if len(res) > 2 else ""
        return self.add(id, passed, residual, note, ms)

    def check_equal(self, id: str, lhs, rhs, note: str = "") -> Entry:
        """Exact equality of two elements (or cochains); the residual is ``lhs - rhs``.

        Either side may be a zero-argument callable, evaluated inside the timer.
        """
        start = time.perf_counter()
        lhs = lhs() if callable(lhs) else lhs
        rhs = rhs() if callable(rhs) else rhs
        ok = lhs == rhs
        residual = None if ok else _residual_text(lhs, rhs)
        return self.add(id, ok, residual, note, (time.perf_counter() - start) * 1000)

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(Entry(prefix + e.id, e.passed, e.residual, e.note, e.wall_ms))

    # -- rendering -------------------------------------------------------------
    def to_obj(self, timings: bool = False) -> dict:
        entries = []
        for e in self.entries:
            d = {"id": e.id, "status": "pass" if e.passed else "fail",
                 "residual": e.residual, "note": e.note}
            if timings:
                d["wall_ms"] = round(e.wall_ms, 3)
            entries.append(d)
        return {
            "schema": REPORT_SCHEMA,
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "seed": self.seed,
            "engine_version": self.engine_version,
            "entries": entries,
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_obj(timings), indent=2, sort_keys=True)

    def to_text(self, timings: bool = True) -> str:
        lines = [f"suite {self.suite}  seed={self.seed}  {self.engine_version}"]
        for e in self.entries:
            line = f"  [{'PASS' if e.passed else 'FAIL'}] {e.id}"
            if timings:
                line += f"  ({e.wall_ms:.1f} ms)"
            if e.note:
                line += f"  -- {e.note}"
            lines.append(line)
            if e.residual:
                lines.append(f"      residual: {_clip(e.residual)}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} "
                     f"({sum(e.passed for e in self.entries)}/{len(self.entries)})")
        return "\n".join(lines)

    def to_latex(self) -> str:
        rows = [r"\begin{tabular}{lll}", r"identity & status & note \\ \hline"]
        for e in self.entries:
            ident = e.id.replace("_", r"\_")
            note = e.note.replace("_", r"\_")
            rows.append(f"{ident} & {'pass' if e.passed else 'fail'} & {note} \\\\")
        rows.append(r"\end{tabular}")
        return "\n".join(rows)


def _clip(s: str, limit: int = 400) -> str:
    return s if len(s) <= limit else s[:limit] + f"... ({len(s)} chars)"


def _residual_text(lhs, rhs) -> str:
    from .simplicial import Cochain

    if isinstance(lhs, Cochain):
        diff = lhs - rhs
        return "; ".join(f"level {p}: {x}" for p, x in diff.components.items())
    return str(lhs - rhs)
