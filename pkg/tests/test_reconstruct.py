"""Slope limiting and CWENO3 reconstruction on cell-average stencils."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schwfv.reconstruct import cweno3_coeffs, minmod3, muscl_slope, poly2_eval

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_minmod3_values():
    assert minmod3(1.0, 2.0, 3.0) == 1.0
    assert minmod3(-1.0, -2.0, -0.5) == -0.5
    assert minmod3(1.0, -2.0, 3.0) == 0.0
    assert minmod3(0.0, 2.0, 3.0) == 0.0
    assert minmod3(0.0, 0.0, 0.0) == 0.0
    np.testing.assert_array_equal(
        minmod3(np.array([1.0, -1.0]), np.array([2.0, -2.0]), np.array([3.0, 1.0])),
        [1.0, 0.0],
    )


@given(finite, finite, finite)
def test_minmod3_bound_and_sign(a, b, c):
    m = float(minmod3(a, b, c))
    assert abs(m) <= min(abs(a), abs(b), abs(c)) + 1e-12
    if m != 0.0:
        assert np.sign(m) == np.sign(a) == np.sign(b) == np.sign(c)


def test_muscl_slope_linear_exact():
    # averages of a linear function equal its center values
    dr = 0.1
    um, u0, up = 1.0, 1.3, 1.6
    assert muscl_slope(um, u0, up, dr) == pytest.approx(3.0, abs=1e-13)


def test_muscl_slope_extremum_is_flat():
    assert muscl_slope(1.0, 2.0, 1.0, 0.1) == 0.0
    assert muscl_slope(2.0, 1.0, 2.0, 0.1) == 0.0


@given(finite, finite, finite, st.floats(1e-6, 10.0))
def test_cweno3_preserves_cell_average(um, u0, up, dr):
    a0, _, a2 = cweno3_coeffs(um, u0, up, dr)
    # integral mean of a0 + a1 x + a2 x^2 over [-dr/2, dr/2]
    mean = a0 + a2 * dr * dr / 12.0
    assert mean == pytest.approx(u0, rel=1e-12, abs=1e-9 * max(1.0, abs(u0)))


def test_cweno3_linear_data_exact():
    dr = 0.05
    slope = -2.5
    um, u0, up = 4.0 - slope * 0.0, 4.0, 4.0 + slope * 0.0  # constant first
    a0, a1, a2 = cweno3_coeffs(um, u0, up, dr)
    assert (a0, a1, a2) == (4.0, 0.0, 0.0)
    um, u0, up = 4.0 - slope * dr, 4.0, 4.0 + slope * dr
    a0, a1, a2 = cweno3_coeffs(um, u0, up, dr)
    assert a0 == pytest.approx(4.0, abs=1e-13)
    assert a1 == pytest.approx(slope, rel=1e-12)
    assert a2 == pytest.approx(0.0, abs=1e-10)


def _interface_error(dr):
    """Reconstruct sin from exact cell averages; error of the right-interface trace."""
    r0 = 3.0
    edges = r0 + dr * np.array([-1.5, -0.5, 0.5, 1.5])
    avgs = (np.cos(edges[:-1]) - np.cos(edges[1:])) / dr
    a0, a1, a2 = cweno3_coeffs(avgs[0], avgs[1], avgs[2], dr)
    return abs(poly2_eval(a0, a1, a2, 0.5 * dr) - math.sin(r0 + 0.5 * dr))


def test_cweno3_third_order_at_interfaces():
    e1, e2, e3 = _interface_error(0.04), _interface_error(0.02), _interface_error(0.01)
    assert math.log2(e1 / e2) > 2.7
    assert math.log2(e2 / e3) > 2.7


def test_poly2_eval_broadcasts():
    out = poly2_eval(1.0, 2.0, 3.0, np.array([0.0, 1.0, -1.0]))
    np.testing.assert_allclose(out, [1.0, 6.0, 2.0])
