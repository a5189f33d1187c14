"""Run driver: initial-data averaging, CFL time stepping, snapshots, steady detection."""

from __future__ import annotations

import bisect
import time
from dataclasses import dataclass, field

import numpy as np

from .burgers import (
    PiecewiseStationaryB,
    max_wave_speed_b,
    rhs_burgers,
)
from .euler import cons_to_prim, max_wave_speed_e, prim_to_cons, rhs_euler, state_valid
from .grid import ConfigError, Grid, RunConfig, SolverAbort
from .timeint import step


@dataclass
class Snapshot:
    """State at one output time; rho/conserved are None for the scalar model."""

    t: float
    r: np.ndarray
    v: np.ndarray
    rho: np.ndarray | None = None
    conserved: np.ndarray | None = None


@dataclass
class RunResult:
    config: RunConfig
    grid: Grid
    final: Snapshot
    snapshots: list[Snapshot] = field(default_factory=list)
    termination: str = "t_end"  # "t_end" | "steady" | "error"
    steps: int = 0
    wall_time: float = 0.0
    diagnostics: dict = field(default_factory=dict)
    error: str | None = None


def average_initial_data(datum, grid, cfg):
    """Cell averages of the initial datum under cfg.averaging.

    Burgers: datum is either a callable v0(r) (midpoint/gauss2 sampling) or a
    PiecewiseStationaryB descriptor (any rule, including exact averages through
    the antiderivative). Euler: datum is a callable r -> (rho, v); midpoint only.
    """
    if cfg.model == "euler":
        rho0, v0 = datum(grid.centers)
        return prim_to_cons(np.asarray(rho0, float), np.asarray(v0, float), cfg.k)
    if isinstance(datum, PiecewiseStationaryB):
        return datum.cell_averages(grid, cfg.averaging)
    if not callable(datum):
        raise ConfigError("initial datum must be callable or a piecewise-stationary descriptor")
    if cfg.averaging == "midpoint":
        return np.asarray(datum(grid.centers), dtype=float)
    if cfg.averaging == "gauss2":
        nodes = grid.gauss_nodes()
        return 0.5 * (
            np.asarray(datum(nodes[:, 0]), dtype=float)
            + np.asarray(datum(nodes[:, 1]), dtype=float)
        )
    raise ConfigError("averaging 'exact' requires a piecewise-stationary initial datum")


def dt_from_cfl(state, grid, cfg, t, stops):
    """CFL time step, clipped to land exactly on the next stop time after t."""
    if cfg.model == "euler":
        s = max_wave_speed_e(state, grid, cfg.k)
    else:
        s = max_wave_speed_b(state, grid)
    dt = cfg.cfl * grid.dr / s if s > 0.0 else cfg.cfl * grid.dr
    i = bisect.bisect_right(stops, t + 1e-14 * max(1.0, abs(t)))
    if i < len(stops) and t + dt >= stops[i]:
        return stops[i] - t, stops[i]
    return dt, None


def _snapshot(state, grid, cfg, t) -> Snapshot:
    if cfg.model == "euler":
        rho, v = cons_to_prim(state, cfg.k)
        return Snapshot(t=float(t), r=grid.centers.copy(), v=np.asarray(v).copy(),
                        rho=np.asarray(rho).copy(), conserved=state.copy())
    return Snapshot(t=float(t), r=grid.centers.copy(), v=state.copy())


def run(config: RunConfig, datum, snapshot_times=()) -> RunResult:
    """Integrate the configured model from the datum to t_end (or steady state).

    Steady detection: max_i |du_i/dt| < cfg.steady_tol over cfg.steady_window
    consecutive steps ends the run with termination "steady". A SolverAbort is
    caught and reported through termination "error" with the last good state.
    """
    cfg = config.resolved()
    grid = cfg.build_grid()
    state = average_initial_data(datum, grid, cfg)
    if cfg.model == "euler":
        ok = state_valid(state, cfg.k)
        if not np.all(ok):
            raise ConfigError(
                f"initial datum yields an invalid conserved state at cell {int(np.argmin(ok))}"
            )
    diag: dict = {}

    snap_times = sorted(set(float(s) for s in snapshot_times))
    if cfg.snapshot_dt > 0.0:
        k_max = int(np.floor(cfg.t_end / cfg.snapshot_dt + 1e-9))
        snap_times = sorted(set(snap_times) | {i * cfg.snapshot_dt for i in range(1, k_max + 1)})
    stops = sorted(set(snap_times) | {cfg.t_end})

    if cfg.model == "euler":
        def rhs_for(dt):
            return lambda u: rhs_euler(u, grid, cfg, dt, diag)
    else:
        def rhs_for(dt):
            return lambda u: rhs_burgers(u, grid, cfg)

    stepper = cfg.stepper()
    t = 0.0
    steps = 0
    steady_run = 0
    termination = "t_end"
    error = None
    snapshots = [_snapshot(state, grid, cfg, 0.0)]
    snap_set = set(snap_times)
    t0 = time.perf_counter()

    t_limit = cfg.t_end * (1.0 - 1e-14)
    while t < t_limit:
        dt, landed = dt_from_cfl(state, grid, cfg, t, stops)
        try:
            new_state = step(stepper, state, rhs_for(dt), dt)
        except SolverAbort as exc:
            exc.step = steps
            exc.t = t
            termination = "error"
            error = str(exc)
            break
        rate = float(np.max(np.abs(new_state - state))) / dt
        state = new_state
        t = landed if landed is not None else t + dt
        steps += 1
        if landed is not None and landed in snap_set:
            snapshots.append(_snapshot(state, grid, cfg, t))
        if rate < cfg.steady_tol:
            steady_run += 1
            if steady_run >= cfg.steady_window:
                termination = "steady"
                break
        else:
            steady_run = 0
        if steps >= cfg.max_steps:
            termination = "error"
            error = f"max_steps={cfg.max_steps} exceeded at t={t:.6g}"
            break

    final = _snapshot(state, grid, cfg, t)
    if not snapshots or snapshots[-1].t != final.t:
        snapshots.append(final)
    return RunResult(
        config=cfg,
        grid=grid,
        final=final,
        snapshots=snapshots,
        termination=termination,
        steps=steps,
        wall_time=time.perf_counter() - t0,
        diagnostics=diag,
        error=error,
    )
