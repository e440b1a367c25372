"""Machine-readable run reports.

A report is one JSON object with keys ``command``, ``inputs`` (path and
sha256 of every file read), ``seed``, ``params``, ``result``, ``log`` and
``wall_time_s``.  Keys are sorted, so two runs with the same arguments,
inputs and seed give byte-identical documents once ``wall_time_s`` is dropped.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np


def file_digest(path: str | Path) -> dict:
    data = Path(path).read_bytes()
    return {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


@dataclass
class RunReport:
    command: str
    seed: Optional[int] = None
    inputs: list[dict] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    log: list = field(default_factory=list)
    wall_time_s: float = 0.0

    def to_dict(self, include_time: bool = True) -> dict:
        d = {
            "command": self.command,
            "seed": self.seed,
            "inputs": self.inputs,
            "params": self.params,
            "result": self.result,
            "log": self.log,
        }
        if include_time:
            d["wall_time_s"] = self.wall_time_s
        return _plain(d)

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), sort_keys=True, indent=2) + "\n"


def strip_wall_time(text: str) -> str:
    """Re-serialise a report without its wall-time field, for reproducibility comparisons."""
    d = json.loads(text)
    d.pop("wall_time_s", None)
    return json.dumps(d, sort_keys=True, indent=2)
