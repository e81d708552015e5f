"""Deterministic CSV/JSON output with the resolved run configuration in the header.

Floats are written with ``repr`` (shortest round-trip decimal) unless a
column asks for a fixed number of significant digits. No timestamps or
host details are written, so identical configurations give byte-identical
files.
"""
from __future__ import annotations

import io
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from .special import SignedLogValue

__all__ = ["format_number", "signed_log10", "render", "write_output"]


def format_number(x, sig: int | None = None) -> str:
    if isinstance(x, SignedLogValue):
        return x.format()
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if sig is not None and math.isfinite(x):
            return f"{x:.{sig}g}"
        return repr(x)
    return str(x)


def signed_log10(v: SignedLogValue) -> tuple[int, float]:
    """``(sign, log10|v|)`` columns for magnitudes outside double range."""
    return v.sign, v.log10()


def _json_value(x):
    if isinstance(x, SignedLogValue):
        return x.format()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def render(columns, rows, config: dict, fmt: str = "csv", version: str = "",
           sig: dict | None = None) -> str:
    """Serialize a table; ``sig`` maps column names to significant digits."""
    sig = sig or {}
    if fmt == "json":
        doc = {"version": version, "config": config, "columns": list(columns),
               "rows": [[_json_value(v) for v in r] for r in rows]}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    buf.write(f"# espider {version}\n")
    buf.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    buf.write(",".join(columns) + "\n")
    digits = [sig.get(c) for c in columns]
    for r in rows:
        buf.write(",".join(format_number(v, d) for v, d in zip(r, digits)) + "\n")
    return buf.getvalue()


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def write_output(text: str, path=None) -> None:
    with _sink(path) as fh:
        fh.write(text)
