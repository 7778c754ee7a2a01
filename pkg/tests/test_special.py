import math

import numpy as np
import scipy.special as ss
from hypothesis import given, strategies as st

from graphon_complexity.special import betainc, betainc_array, unit_ball_volume


@given(st.floats(0.05, 20), st.floats(0.05, 20), st.floats(0, 1))
def test_betainc_matches_scipy(a, b, x):
    ref = ss.betainc(a, b, x)
    assert abs(betainc(a, b, x) - ref) <= 1e-12 * max(ref, 1e-300) + 1e-300


def test_betainc_array_matches_scalar():
    x = np.linspace(0, 1, 501)
    for d in (1, 2, 3, 5, 8):
        got = betainc_array(0.5, (d + 1) / 2, x)
        ref = [betainc(0.5, (d + 1) / 2, v) for v in x]
        np.testing.assert_allclose(got, ref, rtol=1e-13, atol=1e-300)


def test_betainc_edges():
    assert betainc(2, 3, 0.0) == 0.0
    assert betainc(2, 3, 1.0) == 1.0
    # I_x(1/2, 1) = sqrt(x)
    assert math.isclose(betainc(0.5, 1.0, 0.49), 0.7, rel_tol=1e-13)


def test_unit_ball_volume():
    assert unit_ball_volume(1) == 2.0
    assert math.isclose(unit_ball_volume(2), math.pi)
    assert math.isclose(unit_ball_volume(3), 4 * math.pi / 3)
