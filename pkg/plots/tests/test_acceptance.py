"""End-to-end gate: real solver outputs drive both figure operations.

These tests talk to the solver only through its CLI and output files, keeping
the component boundary honest. They need the schwfv package installed.
"""

import json
import subprocess
import sys

import pytest

import wbplots.cli as cli

pytestmark = pytest.mark.acceptance

MAKE_REPORT = """\
import json, sys
from schwfv import acceptance

rows = acceptance.run_criterion(5)
report = {
    "tier": "custom",
    "all_pass": all(r.gate_ok for r in rows),
    "criteria": [{
        "criterion": 5,
        "title": acceptance.thresholds()["criteria"]["5"]["title"],
        "gate_ok": all(r.gate_ok for r in rows),
        "error": None,
        "checks": [r.as_dict() for r in rows],
    }],
}
json.dump(report, open(sys.argv[1], "w"), default=float)
"""


def test_profile_panels_from_solver_run(tmp_path, capsys):
    out_dir = tmp_path / "run"
    proc = subprocess.run(
        ["schwfv", "run", "--test", "testB1", "--out", str(out_dir)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    rc = cli.main(["profiles", str(out_dir / "snapshots.csv"), "--ref", "initial",
                   "--out", str(tmp_path / "profiles.png")])
    assert rc == 0
    assert (tmp_path / "profiles.png").stat().st_size > 0


def test_displacement_fit_from_solver_table(tmp_path, capsys):
    report_path = tmp_path / "suite_report.json"
    proc = subprocess.run(
        [sys.executable, "-c", MAKE_REPORT, str(report_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    rc = cli.main(["displacement", str(report_path), "--out", str(tmp_path / "d.png")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "R^2" in out
    r2 = float(out.split("R^2")[1].split()[0])
    assert r2 >= 0.99
    report = json.loads(report_path.read_text())
    assert report["criteria"][0]["checks"][0]["data"]["rows"]
