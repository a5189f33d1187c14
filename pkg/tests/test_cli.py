"""CLI entry points: run/suite/convergence, CSV round-trips, exit codes."""

import json

import numpy as np
import pytest

import schwfv.cli as cli
from schwfv.acceptance import CheckResult
from schwfv.experiments import run_case
from schwfv.grid import ConfigError


# -- CSV round-trips -------------------------------------------------------------------------


def test_snapshots_csv_round_trip_burgers(tmp_path):
    _, result = run_case("testB1", n_cells=32, t_end=1.0)
    path = tmp_path / "snap.csv"
    cli.write_snapshots_csv(path, result)
    blocks = cli.read_snapshots_csv(path)
    assert len(blocks) == len(result.snapshots)
    for block, snap in zip(blocks, result.snapshots):
        assert block["t"] == snap.t
        assert np.array_equal(block["r"], snap.r)
        assert np.array_equal(block["v"], snap.v)
        assert block["rho"] is None


def test_snapshots_csv_round_trip_euler(tmp_path):
    _, result = run_case("testE1", n_cells=20, t_end=0.1)
    path = tmp_path / "snap.csv"
    cli.write_snapshots_csv(path, result)
    blocks = cli.read_snapshots_csv(path)
    assert len(blocks) == len(result.snapshots)
    for block, snap in zip(blocks, result.snapshots):
        assert np.array_equal(block["v"], snap.v)
        assert np.array_equal(block["rho"], snap.rho)


def test_read_csv_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,radius,speed\n1,2,3\n")
    with pytest.raises(ConfigError, match="header"):
        cli.read_snapshots_csv(path)


# -- run command -----------------------------------------------------------------------------


def test_run_writes_outputs(tmp_path, capsys):
    rc = cli.main([
        "run", "--test", "testB1", "--cells", "32", "--t-end", "1", "--out", str(tmp_path)
    ])
    assert rc == 0
    assert (tmp_path / "snapshots.csv").exists()
    report = json.loads((tmp_path / "result.json").read_text())
    assert report["id"] == "testB1"
    assert report["errors"]["v"] <= 1e-10
    out = capsys.readouterr().out
    assert "termination=" in out and "L1(v)" in out
    blocks = cli.read_snapshots_csv(tmp_path / "snapshots.csv")
    assert blocks[0]["t"] == 0.0


def test_run_unknown_id_exits_1(capsys):
    assert cli.main(["run", "--test", "testZ9"]) == 1
    assert "error:" in capsys.readouterr().err


def test_run_missing_test_lists_ids(capsys):
    assert cli.main(["run"]) == 1
    err = capsys.readouterr().err
    assert "known ids" in err and "testB1" in err and "testE8" in err


def test_run_rejects_euler_order3(capsys):
    assert cli.main(["run", "--test", "testE1", "--model", "euler", "--order", "3"]) == 1
    assert "order 3" in capsys.readouterr().err


def test_run_rejects_model_mismatch(capsys):
    assert cli.main(["run", "--test", "testB1", "--model", "euler"]) == 1
    assert "burgers case" in capsys.readouterr().err


def test_run_invalid_amplitude_exits_1(capsys):
    # amplitude 5 pushes |v| past 1: invalid before the first step, so a config error
    rc = cli.main(["run", "--test", "testE7", "--cells", "50", "--t-end", "1",
                   "--amplitude", "5.0"])
    assert rc == 1
    assert "initial datum" in capsys.readouterr().err


def test_run_solver_abort_exits_2(tmp_path, capsys, monkeypatch):
    real = cli.ex.run_case

    def doctored(case_id, **kw):
        report, result = real(case_id, **kw)
        report["termination"] = "error"
        report["error"] = "synthetic abort"
        return report, result

    monkeypatch.setattr(cli.ex, "run_case", doctored)
    rc = cli.main(["run", "--test", "testB1", "--cells", "16", "--t-end", "0.1",
                   "--out", str(tmp_path)])
    assert rc == 2
    assert "solver abort" in capsys.readouterr().err
    assert (tmp_path / "result.json").exists()  # outputs still written for post-mortem


# -- convergence command ---------------------------------------------------------------------


def test_convergence_prints_orders(capsys):
    rc = cli.main([
        "convergence", "--model", "burgers", "--order", "1",
        "--meshes", "16", "32", "--ref-cells", "64"
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "L1 error" in out
    assert "16" in out and "32" in out


def test_convergence_rejects_degenerate_meshes(capsys):
    rc = cli.main([
        "convergence", "--model", "burgers", "--order", "1",
        "--meshes", "32", "32", "--ref-cells", "64"
    ])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


# -- suite command ---------------------------------------------------------------------------


def _stub_rows(n, passed=True, expected_fail=False):
    return [CheckResult(n, "stub-check", passed, "measured-x", "require-y",
                        expected_fail=expected_fail)]


def test_suite_all_pass(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(cli.acceptance, "run_criterion", lambda n: _stub_rows(n))
    rc = cli.main(["suite", "--tier", "fast", "--jobs", "1", "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "suite_report.json").read_text())
    assert report["tier"] == "fast"
    assert report["all_pass"] is True
    assert all(row["gate_ok"] for row in report["criteria"])
    assert all(row["checks"] for row in report["criteria"])
    out = capsys.readouterr().out
    assert "[PASS]" in out and "suite [fast]: PASS" in out


def test_suite_failing_criterion(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(
        cli.acceptance, "run_criterion",
        lambda n: _stub_rows(n, passed=(n != 2)),
    )
    rc = cli.main(["suite", "--tier", "fast", "--jobs", "1", "--out", str(tmp_path)])
    assert rc == 1
    report = json.loads((tmp_path / "suite_report.json").read_text())
    assert report["all_pass"] is False
    by_n = {row["criterion"]: row for row in report["criteria"]}
    assert by_n[2]["gate_ok"] is False
    assert by_n[1]["gate_ok"] is True
    assert "[FAIL]" in capsys.readouterr().out


def test_suite_unexpected_pass_fails_gate(tmp_path, capsys, monkeypatch):
    # a check marked expected-fail that passes must fail the suite (stale marker)
    monkeypatch.setattr(
        cli.acceptance, "run_criterion",
        lambda n: _stub_rows(n, passed=True, expected_fail=(n == 4)),
    )
    rc = cli.main(["suite", "--tier", "fast", "--jobs", "1", "--out", str(tmp_path)])
    assert rc == 1
    assert "XPASS" in capsys.readouterr().out


def test_suite_crashing_criterion(tmp_path, capsys, monkeypatch):
    def boom(n):
        if n == 7:
            raise RuntimeError("boom")
        return _stub_rows(n)

    monkeypatch.setattr(cli.acceptance, "run_criterion", boom)
    rc = cli.main(["suite", "--tier", "fast", "--jobs", "1", "--out", str(tmp_path)])
    assert rc == 1
    assert "[ERROR]" in capsys.readouterr().out
    report = json.loads((tmp_path / "suite_report.json").read_text())
    row = next(r for r in report["criteria"] if r["criterion"] == 7)
    assert row["error"] == "RuntimeError: boom"
    assert row["checks"] == []


def test_suite_unknown_tier(capsys):
    with pytest.raises(SystemExit):  # argparse rejects bad choices itself
        cli.main(["suite", "--tier", "nightly"])
