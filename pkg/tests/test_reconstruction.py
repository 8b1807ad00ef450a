import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shockconv.grids import Grid1D
from shockconv.reconstruction import (
    WenoParams,
    candidate_values,
    characteristic_interface_values,
    minmod,
    minmod_interface_values,
    smoothness_indicators,
    wenoz_interpolate,
    wenoz_weights,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)


@pytest.mark.parametrize(
    "a,b,expected", [(1.0, 2.0, 1.0), (-1.0, 2.0, 0.0), (-3.0, -2.0, -2.0), (0.0, 5.0, 0.0), (4.0, 4.0, 4.0)]
)
def test_minmod_examples(a, b, expected):
    assert minmod(a, b) == expected


@settings(max_examples=50, deadline=None)
@given(arrays(float, 40, elements=st.floats(0.1, 10.0)))
def test_minmod_values_stay_between_neighbours(U):
    iv = minmod_interface_values(np.stack([U, U]), 0.1, "periodic")
    left = np.concatenate([[U[-1]], U])
    right = np.concatenate([U, [U[0]]])
    lo, hi = np.minimum(left, right), np.maximum(left, right)
    for side in (iv.minus[0], iv.plus[0]):
        assert np.all(side >= lo - 1e-12) and np.all(side <= hi + 1e-12)


def test_minmod_exact_on_linear_data():
    grid = Grid1D(0.0, 1.0, 20)
    U = np.stack([1.0 + 2.0 * grid.centers, 3.0 - grid.centers])
    iv = minmod_interface_values(U, grid.dx, "free")
    inner = slice(2, grid.m - 1)
    np.testing.assert_allclose(iv.minus[0, inner], 1.0 + 2.0 * grid.interfaces[inner], atol=1e-13)
    np.testing.assert_allclose(iv.plus[1, inner], 3.0 - grid.interfaces[inner], atol=1e-13)


@settings(max_examples=100, deadline=None)
@given(arrays(float, (5, 8), elements=finite))
def test_wenoz_weights_sum_to_one(v):
    w = np.array(wenoz_weights(*v))
    assert np.all(w >= 0)
    np.testing.assert_allclose(w.sum(axis=0), 1.0, atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(finite, finite, finite)
def test_wenoz_exact_on_quadratics(a, b, c):
    k = np.arange(6, dtype=float)
    six = (a + b * k + c * k**2)[:, None]
    exact = a + b * 2.5 + c * 2.5**2
    scale = 1 + abs(a) + abs(b) + abs(c)
    for side in ("minus", "plus"):
        assert abs(wenoz_interpolate(six, side=side)[0] - exact) <= 1e-11 * scale * 10
    for P in candidate_values(*six[:5]):
        assert abs(P[0] - exact) <= 1e-11 * scale * 10


def test_smoothness_indicators_match_integral_definition():
    # beta_k = sum_l int (P_k^(l))^2 over the unit cell whose right edge is the interface
    x = sp.symbols("x")
    v = sp.symbols("v0:5")
    coded = smoothness_indicators(*v)
    for k in range(3):
        P = sp.interpolate([(p, v[p]) for p in range(k, k + 3)], x)
        beta = sum(sp.integrate(sp.diff(P, x, l) ** 2, (x, sp.Rational(3, 2), sp.Rational(5, 2))) for l in (1, 2))
        diff = sp.Poly(sp.expand(beta - coded[k]), *v)
        assert max(abs(float(c)) for c in diff.coeffs()) < 1e-14


def test_ideal_weights_reproduce_quartic_interpolant():
    d = WenoParams().d
    assert sum(d) == pytest.approx(1.0, abs=1e-15)
    k = np.arange(5, dtype=float)
    v = (k - 1.3) ** 4
    combo = sum(di * Pi for di, Pi in zip(d, candidate_values(*v)))
    assert combo == pytest.approx((2.5 - 1.3) ** 4, abs=1e-12)


def _interp_error(m):
    grid = Grid1D(0.0, 10.0, m)
    k = 2 * np.pi / 10.0
    U = np.stack([3.0 + 0.5 * np.sin(k * grid.centers), 0.4 * np.cos(k * grid.centers)])
    iv = characteristic_interface_values(U, 10.0, WenoParams(), "periodic")
    x = grid.interfaces
    ex = np.stack([3.0 + 0.5 * np.sin(k * x), 0.4 * np.cos(k * x)])
    return max(np.abs(iv.minus - ex).max(), np.abs(iv.plus - ex).max())


def test_characteristic_wenoz_is_fifth_order_on_smooth_data():
    e1, e2 = _interp_error(80), _interp_error(160)
    assert np.log2(e1 / e2) >= 4.5


def test_characteristic_reconstruction_is_non_oscillatory_at_a_jump():
    grid = Grid1D(0.0, 10.0, 100)
    h = np.where(grid.centers < 5.0, 2.0, 1.0)
    iv = characteristic_interface_values(np.stack([h, np.zeros_like(h)]), 10.0, WenoParams(), "free")
    assert iv.minus[0].max() <= 2.0 + 1e-3 and iv.minus[0].min() >= 1.0 - 1e-3
