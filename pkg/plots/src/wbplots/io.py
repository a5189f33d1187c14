"""Readers for the solver's interchange files (CSV snapshots, JSON reports)."""

import json
from pathlib import Path

import numpy as np

CSV_HEADER = "t,r,v,rho"


class PlotDataError(ValueError):
    """Malformed, empty, or mismatched input data."""


def read_snapshots(path):
    """Parse a snapshots CSV into a list of {t, r, v, rho} blocks.

    Blocks are separated by blank lines; rho is None when its column is empty
    (scalar-model runs).
    """
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        head = lines[0].strip() if lines else ""
        raise PlotDataError(f"unexpected CSV header {head!r} in {path}; want {CSV_HEADER!r}")
    blocks, cur = [], []
    for line in lines[1:]:
        if line.strip():
            cur.append(line)
        elif cur:
            blocks.append(cur)
            cur = []
    if cur:
        blocks.append(cur)
    if not blocks:
        raise PlotDataError(f"no snapshot blocks in {path}")
    out = []
    for rows in blocks:
        cols = [row.split(",") for row in rows]
        if any(len(c) != 4 for c in cols):
            raise PlotDataError(f"malformed row in {path}")
        rho_raw = [c[3].strip() for c in cols]
        out.append({
            "t": float(cols[0][0]),
            "r": np.array([float(c[1]) for c in cols]),
            "v": np.array([float(c[2]) for c in cols]),
            "rho": None if "" in rho_raw else np.array([float(s) for s in rho_raw]),
        })
    return out


def read_suite_report(path):
    """Load a suite_report.json; wraps parse failures in PlotDataError."""
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise PlotDataError(f"not valid JSON: {path} ({exc})") from exc


def displacement_rows(report, criterion=None):
    """(integral, displacement, criterion) from a suite report's data rows.

    Displacement tables ride on a check's data as "rows" of
    [amplitude, integral, displacement, ...]. With several criteria carrying
    rows, `criterion` selects one; the default is the lowest-numbered.
    """
    found = {}
    for crit in report.get("criteria", []):
        for check in crit.get("checks", []):
            rows = (check.get("data") or {}).get("rows")
            if rows and all(len(row) >= 3 for row in rows):
                found.setdefault(int(crit["criterion"]), rows)
                break
    if not found:
        raise PlotDataError("no displacement rows in the report")
    if criterion is None:
        criterion = min(found)
    if criterion not in found:
        raise PlotDataError(
            f"criterion {criterion} has no displacement rows; have {sorted(found)}")
    rows = found[criterion]
    x = np.array([row[1] for row in rows], dtype=float)
    y = np.array([row[2] for row in rows], dtype=float)
    return x, y, criterion
