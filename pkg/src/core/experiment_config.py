"""
Experiment Configuration — Container Lab
========================================

Two kinds of configuration live here.

``ExperimentConfig`` records one CLI invocation (command, parameters, budget,
seed, threads, output path, format).  It round-trips through ``to_dict`` /
``from_dict`` and is embedded verbatim in every report, so a report carries
everything needed to reproduce it.

``VerificationProfile`` is a JSON file under ``config/experiments/`` that
describes a verify-all level: its default budget and the parameter grid of
every acceptance check.  ``quick`` and ``desk`` ship with the repository; any
other profile can be added as a new file.

Design principles
-----------------
* Keys starting with ``_`` are comments and are stripped on load.
* Unknown grid sections are kept as-is so new checks need no schema change.
* Defaults are desk-scale and honest: 2^20 nodes, 60 s, 64 vertices.
"""

from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Optional

from src.core.budget import EnumBudget


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

_HERE = os.path.dirname(__file__)
_DEFAULT_PROFILE_DIR = os.path.normpath(
    os.path.join(_HERE, "..", "..", "config", "experiments")
)
_BUILTIN_PROFILE = "desk"

FORMATS = ("json", "csv")


# ---------------------------------------------------------------------------
# ExperimentConfig
# ---------------------------------------------------------------------------

class ExperimentConfig:
    """
    The full configuration of one run.

    ``params`` holds the command's own flags as JSON-compatible values
    (graph spec strings, schedule strings, integers); it is echoed unchanged.
    """

    def __init__(
        self,
        command: str,
        params: Optional[Dict[str, Any]] = None,
        budget: Optional[EnumBudget] = None,
        seed: Optional[int] = None,
        threads: int = 1,
        output: Optional[str] = None,
        fmt: str = "json",
    ):
        if fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
        if threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")
        self.command = command
        self.params: Dict[str, Any] = dict(params or {})
        self.budget = budget or EnumBudget()
        self.seed = seed
        self.threads = threads
        self.output = output
        self.fmt = fmt

    def to_dict(self) -> dict:
        """Serialisable form.  ``threads`` and ``output`` never change results."""
        return {
            "command": self.command,
            "params":  dict(sorted(self.params.items())),
            "budget":  self.budget.to_dict(),
            "seed":    self.seed,
            "format":  self.fmt,
        }

    def to_full_dict(self) -> dict:
        data = self.to_dict()
        data["threads"] = self.threads
        data["output"] = self.output
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = _strip_comments(data)
        return cls(
            command=data.get("command", ""),
            params=data.get("params", {}),
            budget=EnumBudget.from_dict(data.get("budget")),
            seed=data.get("seed"),
            threads=int(data.get("threads", 1)),
            output=data.get("output"),
            fmt=data.get("format", "json"),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, ExperimentConfig) and self.to_full_dict() == other.to_full_dict()

    def __repr__(self) -> str:
        return f"ExperimentConfig({self.command!r}, {self.params!r})"


# ---------------------------------------------------------------------------
# VerificationProfile
# ---------------------------------------------------------------------------

class VerificationProfile:
    """
    A loaded verify-all profile.

    ``grid`` maps a check name (``antichains``, ``containers``, ``kleitman``,
    ...) to that check's parameters; ``section(name)`` returns it with
    comments removed.
    """

    def __init__(self, data: dict):
        self.schema_version: str = data.get("schema_version", "1.0")
        self.profile_id: str = data.get("profile_id", "")
        self.description: str = data.get("description", "")
        self.budget = EnumBudget.from_dict(_strip_comments(data.get("budget", {})))
        self.seed: int = int(data.get("seed", 0))
        self.grid: Dict[str, dict] = {
            k: _strip_comments(v) for k, v in _strip_comments(data.get("grid", {})).items()
        }

    def section(self, name: str) -> dict:
        return dict(self.grid.get(name, {}))

    def enabled(self, name: str) -> bool:
        return name in self.grid and self.grid[name].get("enabled", True)

    def checks(self) -> List[str]:
        return [name for name in self.grid if self.enabled(name)]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "profile_id":     self.profile_id,
            "description":    self.description,
            "budget":         self.budget.to_dict(),
            "seed":           self.seed,
            "grid":           self.grid,
        }


# ---------------------------------------------------------------------------
# Loading helpers
# ---------------------------------------------------------------------------

def load_profile(profile_id_or_path: str) -> VerificationProfile:
    """
    Load a VerificationProfile by profile ID or explicit file path.

    Args:
        profile_id_or_path: E.g. "desk" or "/path/to/profile.json"

    Raises:
        FileNotFoundError: Profile not found.
        ValueError:        Invalid JSON.
    """
    if os.sep in profile_id_or_path or profile_id_or_path.endswith(".json"):
        path = profile_id_or_path
    else:
        path = os.path.join(_DEFAULT_PROFILE_DIR, f"{profile_id_or_path}.json")

    if not os.path.exists(path):
        raise FileNotFoundError(f"Verification profile not found: {path}")

    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)

    return VerificationProfile(data)


def load_default_profile() -> VerificationProfile:
    return load_profile(_BUILTIN_PROFILE)


def list_available_profiles(profile_dir: Optional[str] = None) -> List[str]:
    """Return list of available profile IDs (filenames without .json)."""
    directory = profile_dir or _DEFAULT_PROFILE_DIR
    if not os.path.isdir(directory):
        return []
    return [
        os.path.splitext(f)[0]
        for f in sorted(os.listdir(directory))
        if f.endswith(".json")
    ]


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------

def _strip_comments(d: dict) -> dict:
    """Remove any key starting with '_' (used as inline JSON comments)."""
    if not isinstance(d, dict):
        return d
    return {k: v for k, v in d.items() if not k.startswith("_")}
