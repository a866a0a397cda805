"""Experiment configuration: CLI flags, optionally layered over a JSON file."""
from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from obddlab.constants import DEFAULT_EPSILON, DEFAULT_SEED, THREADS_ENV, ReportFormat
from obddlab.errors import UnknownSpecError

logger = logging.getLogger(__name__)

COMMANDS = (
    "eq-demo",
    "mod-demo",
    "req-demo",
    "seq-demo",
    "pj-demo",
    "rpj-demo",
    "reorder-verify",
    "commutativity-check",
    "good-set",
    "width-table",
    "width-search",
)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(int(raw), 1)
        except ValueError:
            logger.warning("ignoring %s=%r", THREADS_ENV, raw)
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ExperimentConfig:
    cmd: str
    fn: Optional[str] = None
    program: Optional[str] = None
    q: Optional[int] = None
    p: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    n: Optional[int] = None
    epsilon: float = DEFAULT_EPSILON
    seed: int = DEFAULT_SEED
    samples: int = 200
    orders: str = "all"
    mode: str = "plain"
    out: Optional[str] = None
    format: ReportFormat = ReportFormat.JSON

    def __post_init__(self):
        if self.cmd not in COMMANDS:
            raise UnknownSpecError(f"unknown command {self.cmd!r}")
        object.__setattr__(self, "format", ReportFormat(self.format))
        if not 0 < self.epsilon < 1:
            raise UnknownSpecError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.orders not in ("all", "id") and not str(self.orders).isdigit():
            raise UnknownSpecError(f"--orders takes 'all', 'id' or a count, got {self.orders!r}")
        object.__setattr__(self, "orders", str(self.orders))

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UnknownSpecError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path, **overrides) -> "ExperimentConfig":
        """Read a JSON config; non-None ``overrides`` win over the file."""
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UnknownSpecError(f"cannot read config {path}: {exc}") from exc
        data.update({key: value for key, value in overrides.items() if value is not None})
        return cls.from_mapping(data)

    def to_json(self) -> dict:
        data = asdict(self)
        data["format"] = self.format.value
        return data
