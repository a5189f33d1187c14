"""SSP Runge-Kutta steppers: stage algebra, order, and NaN aborts."""

import math

import numpy as np
import pytest

from schwfv.grid import SolverAbort
from schwfv.timeint import STEPPERS, step

DECAY = lambda u: -u  # noqa: E731


@pytest.mark.parametrize("kind", STEPPERS)
def test_zero_rhs_is_identity(kind):
    u = np.array([1.0, -2.0, 0.5])
    np.testing.assert_array_equal(step(kind, u, lambda x: np.zeros_like(x), 0.1), u)


@pytest.mark.parametrize("kind", STEPPERS)
def test_constant_rhs_is_exact(kind):
    u = np.array([1.0, -2.0])
    c = np.array([0.3, 0.7])
    out = step(kind, u, lambda x: c, 0.25)
    np.testing.assert_allclose(out, u + 0.25 * c, rtol=0, atol=1e-15)


def test_stage_algebra_matches_definitions():
    u = np.array([1.0])
    dt = 0.2
    # forward Euler
    np.testing.assert_allclose(step("forward_euler", u, DECAY, dt), u * (1 - dt))
    # TVDRK2: u1 = u + dt L(u); u+ = u/2 + (u1 + dt L(u1))/2
    u1 = u * (1 - dt)
    np.testing.assert_allclose(
        step("tvdrk2", u, DECAY, dt), 0.5 * u + 0.5 * u1 * (1 - dt), atol=1e-15
    )
    # TVDRK3: u2 = 3u/4 + (u1 + dt L(u1))/4; u+ = u/3 + 2(u2 + dt L(u2))/3
    u2 = 0.75 * u + 0.25 * u1 * (1 - dt)
    np.testing.assert_allclose(
        step("tvdrk3", u, DECAY, dt), u / 3.0 + (2.0 / 3.0) * u2 * (1 - dt), atol=1e-15
    )


@pytest.mark.parametrize(
    "kind, local_order", [("forward_euler", 2), ("tvdrk2", 3), ("tvdrk3", 4)]
)
def test_one_step_error_ratio_on_decay(kind, local_order):
    # one step of u' = -u from u=1: error vs exp(-dt) shrinks by 2^local_order
    def err(dt):
        out = step(kind, np.array([1.0]), DECAY, dt)
        return abs(float(out[0]) - math.exp(-dt))

    ratio = err(0.1) / err(0.05)
    assert ratio == pytest.approx(2.0**local_order, rel=0.25)


@pytest.mark.parametrize("kind", STEPPERS)
@pytest.mark.parametrize("bad", [np.nan, np.inf])
def test_nonfinite_aborts_with_stage(kind, bad):
    u = np.array([1.0, 2.0, 3.0])

    def rhs(x):
        out = np.zeros_like(x)
        out[1] = bad
        return out

    with pytest.raises(SolverAbort) as err:
        step(kind, u, rhs, 0.1)
    assert err.value.stage == 1
    assert err.value.cell == 1


def test_abort_reports_later_stage():
    calls = {"n": 0}

    def rhs(x):
        calls["n"] += 1
        if calls["n"] == 3:  # only the third stage produces a NaN
            return np.full_like(x, np.nan)
        return np.zeros_like(x)

    with pytest.raises(SolverAbort) as err:
        step("tvdrk3", np.array([1.0]), rhs, 0.1)
    assert err.value.stage == 3


def test_unknown_stepper():
    with pytest.raises(ValueError, match="unknown stepper"):
        step("rk4", np.array([1.0]), DECAY, 0.1)
