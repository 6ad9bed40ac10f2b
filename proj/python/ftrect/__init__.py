"""Python access to the finite-time rectifier controller simulator."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

try:
    from . import _core
except ImportError:  # source tree without a compiled module
    _core = None

__all__ = ["RunResult", "columns", "load", "presets", "run", "verify"]


def _require_core():
    if _core is None:
        raise ImportError("ftrect._core is not built; install the package or build with FTRECT_BUILD_PYTHON=ON")
    return _core


def _as_text(scenario: str | Path | Mapping[str, Any]) -> str:
    if isinstance(scenario, Mapping):
        return json.dumps(scenario)
    return Path(scenario).read_text()


@dataclass
class RunResult:
    columns: dict[str, Any]
    summary: dict[str, Any]
    aborted: bool
    abort_reason: str

    @property
    def voltage(self) -> dict[str, Any]:
        return self.summary["voltage"]

    @property
    def current(self) -> dict[str, Any]:
        return self.summary["current"]


def columns() -> list[tuple[str, str]]:
    return _require_core().columns()


def presets() -> dict[str, dict[str, Any]]:
    return {name: json.loads(text) for name, text in _require_core().presets()}


def load(scenario: str | Path | Mapping[str, Any], overrides: Sequence[str] = ()) -> dict[str, Any]:
    """Validated scenario with every default filled in."""
    return json.loads(_require_core().normalize_scenario(_as_text(scenario), list(overrides)))


def run(scenario: str | Path | Mapping[str, Any], overrides: Sequence[str] = (), decimation: int = 0) -> RunResult:
    out = _require_core().run(_as_text(scenario), list(overrides), decimation)
    return RunResult(out["columns"], json.loads(out["summary"]), out["aborted"], out["abort_reason"])


def verify(scenario: str | Path | Mapping[str, Any], overrides: Sequence[str] = ()) -> dict[str, Any]:
    return json.loads(_require_core().verify(_as_text(scenario), list(overrides)))
