"""Figures from schwfv run outputs: profile panels and displacement scatter.

Reads only the documented interchange files (snapshots.csv, result.json,
suite_report.json); never imports the solver.
"""

from .figures import plot_displacement, plot_profiles
from .io import PlotDataError, displacement_rows, read_snapshots, read_suite_report

__all__ = [
    "PlotDataError",
    "displacement_rows",
    "plot_displacement",
    "plot_profiles",
    "read_snapshots",
    "read_suite_report",
]
