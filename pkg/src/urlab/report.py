"""JSON verdict reports.

Reports are written with sorted keys and a fixed indent so identical inputs
give byte-identical output. Python's float repr round-trips exactly, so
``VerdictReport.from_json(r.to_json()) == r``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from . import __version__

__all__ = ["VerdictReport"]

TOOL = "ur-lab"


@dataclass
class VerdictReport:
    command: str
    parameters: dict = field(default_factory=dict)
    verdicts: list[dict] = field(default_factory=list)
    relations: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    tool: str = TOOL
    version: str = __version__

    @classmethod
    def from_verdicts(cls, command: str, verdicts: list[dict], parameters: dict | None = None) -> "VerdictReport":
        """Build a report for a list of ``{"inputs": ..., **URVerdict.to_dict()}`` entries."""
        failed = [v for v in verdicts if not v["pass"]]
        summary = {
            "checks": len(verdicts),
            "passed": len(verdicts) - len(failed),
            "failed": len(failed),
            "worst_margin": min((v["margin"] for v in verdicts), default=None),
        }
        return cls(command=command, parameters=parameters or {}, verdicts=verdicts, summary=summary)

    @property
    def ok(self) -> bool:
        return self.summary.get("failed", 0) == 0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "VerdictReport":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "VerdictReport":
        return cls.from_dict(json.loads(text))
