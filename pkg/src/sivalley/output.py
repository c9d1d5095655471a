"""Deterministic CSV tables and JSON run manifests."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import platform
from pathlib import Path

import matplotlib
import numpy as np
import scipy

from . import __version__

MANIFEST_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "sivalley run manifest",
    "type": "object",
    "required": ["tool", "version", "command", "seed", "config", "outputs", "environment"],
    "properties": {
        "tool": {"const": "sivalley"},
        "version": {"type": "string"},
        "command": {"type": "string"},
        "seed": {"type": "integer"},
        "config": {"type": "object"},
        "notes": {"type": "array", "items": {"type": "string"}},
        "outputs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["file", "kind"],
                "properties": {
                    "file": {"type": "string"},
                    "kind": {"enum": ["table", "figure", "config"]},
                    "sha256": {"type": "string"},
                    "rows": {"type": "integer"},
                },
            },
        },
        "environment": {"type": "object"},
    },
}


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> int:
    """Write an RFC 4180 table (CRLF line ends); floats use shortest round-trip repr."""
    n = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
            w.writerow([_cell(x) for x in row])
            n += 1
    return n


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def environment() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "matplotlib": matplotlib.__version__,
    }


def write_manifest(path: Path, command: str, seed: int, config: dict, outputs: list[dict],
                   notes: list[str] | None = None) -> dict:
    """JSON manifest with sorted keys; contains nothing that varies run to run."""
    doc = {
        "tool": "sivalley",
        "version": __version__,
        "command": command,
        "seed": int(seed),
        "config": config,
        "outputs": outputs,
        "environment": environment(),
        "notes": list(notes or []),
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n")
    return doc
