"""CSV and manifest serialization.

CSVs use a header row, LF line endings, and floats printed with 17
significant digits so values round-trip exactly through text.  The run
manifest is JSON, written atomically, and records content hashes of every
emitted file; timestamps live only here so data files stay byte-stable.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def format_cell(value) -> str:
    """One CSV cell: ints verbatim, floats at 17 significant digits."""
    if isinstance(value, str):
        return _escape(value)
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    raise TypeError(f"unsupported cell type {type(value).__name__}")


def _escape(text: str) -> str:
    if any(c in text for c in ',"\n\r'):
        return '"' + text.replace('"', '""') + '"'
    return text


def write_csv(path, header, rows) -> None:
    """Write a table; header-only when rows is empty."""
    path = Path(path)
    lines = [",".join(_escape(h) for h in header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as e:
        raise OSError(f"writing {path}: {e}") from e


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Provenance record for one CLI run."""

    master_seed: int
    experiment: str
    config: dict
    tool_version: str
    started_at: str
    finished_at: str = ""
    outputs: list = field(default_factory=list)
    seed_scopes: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def add_output(self, path) -> None:
        path = Path(path)
        self.outputs.append({"name": path.name, "sha256": sha256_file(path)})


def write_manifest(path, manifest: RunManifest) -> None:
    """Atomic JSON dump: write a temp file in place, then rename over."""
    path = Path(path)
    payload = {
        "master_seed": manifest.master_seed,
        "experiment": manifest.experiment,
        "config": manifest.config,
        "tool_version": manifest.tool_version,
        "started_at": manifest.started_at,
        "finished_at": manifest.finished_at,
        "outputs": manifest.outputs,
        "seed_scopes": manifest.seed_scopes,
    }
    if manifest.extra:
        payload["extra"] = manifest.extra
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except OSError as e:
        raise OSError(f"writing {path}: {e}") from e
