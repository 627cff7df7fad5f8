"""CSV and JSON emission with reproducible, diff-able formatting.

CSV: header row, LF line endings, '.' decimal separator, shortest float
representation that round-trips exactly. JSON: UTF-8, sorted keys.
"""

from __future__ import annotations

import json

import numpy as np


def format_float(value) -> str:
    """Shortest decimal string that parses back to the same float."""
    return repr(float(value))


def write_csv(path, header, columns):
    """Write equal-length ``columns`` under ``header`` names."""
    columns = [np.asarray(c, dtype=float) for c in columns]
    n = len(columns[0])
    if any(len(c) != n for c in columns):
        raise ValueError("all columns must have equal length")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(format_float(c[i]) for c in columns) + "\n")


def read_csv(path):
    """Read a CSV written by :func:`write_csv`; returns (header, columns)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, [data[:, i] for i in range(data.shape[1])]


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
