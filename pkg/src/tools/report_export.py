"""
Report Export — Container Lab
=============================

Writes command reports as:
  - JSON  (sorted keys, 2-space indent; the stable interface)
  - CSV   (a flat pandas projection for spreadsheets: one row per entry of
           the report's ``rows`` list when it has one, otherwise the
           json_normalize of the whole report)

Reports carry no wall-clock data, so identical configs give identical bytes.
"""

from __future__ import annotations

import io
import json
import os
import sys
from typing import List, Optional, TextIO

from src.core.errors import ParameterError
from src.core.experiment_config import FORMATS, ExperimentConfig

TOOL_NAME = "container-lab"


def build_report(config: ExperimentConfig, body: dict) -> dict:
    """Wrap a command's result with the tool name, version and config echo."""
    from src import __version__

    report = {"tool": TOOL_NAME, "version": __version__, "config": config.to_dict()}
    for key, value in body.items():
        if key in report:
            raise ParameterError(f"report field {key!r} is reserved")
        report[key] = value
    return report


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _cell(value):
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return value


def render_csv(report: dict) -> str:
    import pandas as pd

    rows = report.get("rows")
    if isinstance(rows, list) and rows:
        frame = pd.json_normalize(rows)
    else:
        flat = {k: v for k, v in report.items() if k != "rows"}
        frame = pd.json_normalize(flat)
    frame = frame.reindex(sorted(frame.columns), axis=1)
    for column in frame.columns:
        frame[column] = frame[column].map(_cell)
    buf = io.StringIO()
    frame.to_csv(buf, index=False)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------

def render(report: dict, fmt: str = "json") -> str:
    if fmt not in FORMATS:
        raise ParameterError(f"format must be one of {FORMATS}, got {fmt!r}")
    return render_json(report) if fmt == "json" else render_csv(report)


def write_report(report: dict, fmt: str = "json", out: Optional[str] = None,
                 stream: Optional[TextIO] = None) -> List[str]:
    """
    Write ``report`` to ``out`` (created with its parent directory) or to
    ``stream`` / stdout.

    Returns:
        List of file paths written (empty for stream output).
    """
    text = render(report, fmt)
    if out:
        parent = os.path.dirname(os.path.abspath(out))
        os.makedirs(parent, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return [out]
    (stream or sys.stdout).write(text)
    return []
