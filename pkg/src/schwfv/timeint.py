"""Strong-stability-preserving (TVD) Runge-Kutta steppers."""

from __future__ import annotations

import numpy as np

from .grid import SolverAbort

STEPPERS = ("forward_euler", "tvdrk2", "tvdrk3")
STEPPER_FOR_ORDER = {1: "forward_euler", 2: "tvdrk2", 3: "tvdrk3"}


def _checked(u, stage):
    ok = np.isfinite(u)
    if not ok.all():
        cellwise = ok if u.ndim == 1 else ok.all(axis=tuple(range(1, u.ndim)))
        cell = int(np.argmin(cellwise))
        raise SolverAbort("non-finite state after stage", cell=cell, stage=stage)
    return u


def step(kind, u, rhs, dt):
    """Advance u by one step of size dt; rhs(u) returns du/dt.

    All steppers are convex combinations of forward-Euler substeps (SSP),
    so TVD-type stability of the spatial operator is inherited.
    """
    if kind == "forward_euler":
        return _checked(u + dt * rhs(u), 1)
    if kind == "tvdrk2":
        u1 = _checked(u + dt * rhs(u), 1)
        return _checked(0.5 * u + 0.5 * (u1 + dt * rhs(u1)), 2)
    if kind == "tvdrk3":
        u1 = _checked(u + dt * rhs(u), 1)
        u2 = _checked(0.75 * u + 0.25 * (u1 + dt * rhs(u1)), 2)
        return _checked(u / 3.0 + (2.0 / 3.0) * (u2 + dt * rhs(u2)), 3)
    raise ValueError(f"unknown stepper {kind!r}")
