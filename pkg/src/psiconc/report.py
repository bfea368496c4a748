"""Key-ordered report documents emitted by the command-line tool."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__


def _plain(v):
    """Convert numpy scalars/arrays and tuples into JSON-friendly values."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (np.floating, float)):
        v = float(v)
        if math.isnan(v) or math.isinf(v):
            return repr(v)
        return v
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


@dataclass
class ReportDocument:
    command: str
    seed: int | None = None
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    formulas: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self) -> dict:
        return _plain({
            "meta": {"command": self.command, "version": self.version,
                     "seed": self.seed, "timestamp": self.timestamp},
            "inputs": self.inputs,
            "results": self.results,
            "formulas": self.formulas,
            "warnings": list(self.warnings),
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        d = json.loads(text)
        meta = d["meta"]
        return cls(command=meta["command"], seed=meta["seed"], inputs=d["inputs"],
                   results=d["results"], formulas=d["formulas"], warnings=d["warnings"],
                   version=meta["version"], timestamp=meta["timestamp"])

    def to_table(self) -> str:
        lines = []

        def walk(prefix, v):
            if isinstance(v, dict):
                for k in sorted(v):
                    walk(f"{prefix}.{k}" if prefix else k, v[k])
            elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
                for i, x in enumerate(v):
                    walk(f"{prefix}[{i}]", x)
            else:
                lines.append(f"{prefix}: {json.dumps(v, ensure_ascii=False)}")

        walk("", self.to_dict())
        return "\n".join(lines) + "\n"

    def render(self, fmt: str = "json") -> str:
        return self.to_table() if fmt == "table" else self.to_json()
