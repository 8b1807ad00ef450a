import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shockconv.swe_model import (
    SHOCK_LEFT,
    SHOCK_RIGHT,
    NegativeDepthError,
    SWState,
    eigenvalues,
    flux,
    isolated_shock_antiderivative,
    isolated_shock_exact,
    jacobian,
    local_speeds,
    roe_basis,
)


@pytest.mark.parametrize(
    "h,q,expected",
    [(1.0, 0.0, (0.0, 5.0)), (2.5, 2.5, (2.5, 33.75)), (1.0, -1.0, (-1.0, 6.0))],
)
def test_flux_values(h, q, expected):
    np.testing.assert_allclose(flux(SWState(h, q), 10.0), expected, rtol=1e-15)


@pytest.mark.parametrize(
    "state,g,expected",
    [(SWState(2.5, 0.0), 10.0, (-5.0, 5.0)), (SWState(0.1, 0.1), 10.0, (0.0, 2.0)), (SWState(1.0, 0.0), 0.0, (0.0, 0.0))],
)
def test_eigenvalues(state, g, expected):
    np.testing.assert_allclose(eigenvalues(state, g), expected, atol=1e-14)


@pytest.mark.parametrize("fn", [lambda U: flux(U, 10.0), lambda U: eigenvalues(U, 10.0)])
@pytest.mark.parametrize("h", [0.0, -1.0, 1e-13])
def test_depth_guard(fn, h):
    with pytest.raises(NegativeDepthError):
        fn(SWState(h, 0.0))


def test_roe_averages():
    b = roe_basis(SWState(1.0, 2.0), SWState(1.0, 2.0), 10.0)
    assert b.h_hat == pytest.approx(1.0)
    assert b.u_hat == pytest.approx(2.0)
    b = roe_basis(SWState(1.0, 0.0), SWState(4.0, 12.0), 10.0)
    assert b.h_hat == pytest.approx(2.5)
    assert b.u_hat == pytest.approx(2.0)


def _fd_jacobian(U, g, eps=1e-6):
    U = np.asarray(U, dtype=float)
    J = np.empty((2, 2))
    for k in range(2):
        e = np.zeros(2)
        e[k] = eps * max(1.0, abs(U[k]))
        J[:, k] = (flux(U + e, g) - flux(U - e, g)) / (2 * e[k])
    return J


@settings(max_examples=200, deadline=None)
@given(h=st.floats(0.1, 5.0), u=st.floats(-5.0, 5.0))
def test_eigenvalues_match_fd_jacobian(h, u):
    U = np.array([h, h * u])
    J = _fd_jacobian(U, 10.0)
    np.testing.assert_allclose(J, jacobian(U, 10.0), atol=1e-7)
    ev = np.sort(np.linalg.eigvals(jacobian(U, 10.0)).real)
    np.testing.assert_allclose(ev, eigenvalues(U, 10.0), atol=1e-10)


def test_roe_diagonalizes_random_pairs():
    rng = np.random.default_rng(7)
    hL, hR = rng.uniform(0.1, 5.0, (2, 1000))
    uL, uR = rng.uniform(-5.0, 5.0, (2, 1000))
    g = 10.0
    b = roe_basis(np.stack([hL, hL * uL]), np.stack([hR, hR * uR]), g)
    for k in range(1000):
        R, Ri = b.R[:, :, k], b.Rinv[:, :, k]
        np.testing.assert_allclose(Ri @ R, np.eye(2), atol=1e-12)
        A = jacobian((b.h_hat[k], b.h_hat[k] * b.u_hat[k]), g)
        D = Ri @ A @ R
        lam = np.array([b.u_hat[k] - b.c_hat[k], b.u_hat[k] + b.c_hat[k]])
        scale = np.max(np.abs(lam))
        assert abs(D[0, 1]) <= 1e-10 * scale and abs(D[1, 0]) <= 1e-10 * scale
        np.testing.assert_allclose(np.diag(D), lam, rtol=1e-10, atol=1e-10 * scale)


def test_characteristic_round_trip():
    rng = np.random.default_rng(1)
    V = np.stack([rng.uniform(0.5, 3.0, 50), rng.uniform(-2.0, 2.0, 50)])
    b = roe_basis(V[:, :-1], V[:, 1:], 10.0)
    stencil = np.stack([V[:, :-1], V[:, 1:]], axis=1)  # (2, 2, 49)
    back = b.to_conservative(b.to_characteristic(stencil))
    np.testing.assert_allclose(back, stencil, atol=1e-12)


def test_local_speeds():
    s = SWState(2.5, 0.0)
    ap, am = local_speeds(s, s, 10.0, floor_at_zero=True)
    assert (ap, am) == pytest.approx((5.0, -5.0))
    # u = 10, c = 1 needs g h = 1
    fast = SWState(0.1, 1.0)
    assert local_speeds(fast, fast, 10.0, True) == pytest.approx((11.0, 0.0))
    assert local_speeds(fast, fast, 10.0, False) == pytest.approx((11.0, 9.0))


def test_isolated_shock_exact_values():
    assert isolated_shock_exact(0.0, 0.0) == SWState(1.0, 0.0)
    h, q = isolated_shock_exact(6.0, 0.0)
    assert h == pytest.approx(0.17082039324993692, rel=1e-14)
    assert q == pytest.approx(-0.8291796067500631, rel=1e-14)
    assert isolated_shock_exact(6.0, 1.5) == SWState(1.0, 0.0)
    with pytest.raises(ValueError):
        isolated_shock_exact(0.0, 0.0, g=9.81)


def test_rankine_hugoniot_isolated_shock():
    g, s = 10.0, 1.0
    UL = np.array(SHOCK_LEFT)
    UR = np.array(SHOCK_RIGHT)
    jump_U = UR - UL
    jump_F = flux(UR, g) - flux(UL, g)
    np.testing.assert_allclose(s * jump_U, jump_F, rtol=1e-12, atol=1e-12 * np.abs(jump_F).max())


def test_isolated_shock_antiderivative():
    x = np.array([0.0, 3.0, 6.0, 8.0])
    I = isolated_shock_antiderivative(x, 1.0)
    np.testing.assert_allclose(I, [0.0, 3.0, 6.0, 6.0 + 2.0 * SHOCK_RIGHT.h], rtol=1e-15)
