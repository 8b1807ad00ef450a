"""Saint-Venant physics on a flat bottom.

Conserved variables are stacked as ``U = (h, q)`` along the leading axis, so
every function here accepts a single state ``(h, q)`` or arrays of shape
``(2, ...)`` alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEPTH_FLOOR = 1.0e-12


class NegativeDepthError(ValueError):
    """Raised when a depth at or below :data:`DEPTH_FLOOR` shows up."""

    def __init__(self, message: str, index: int | None = None, time: float | None = None):
        super().__init__(message)
        self.index = index
        self.time = time

    def at_time(self, time: float) -> NegativeDepthError:
        return NegativeDepthError(f"{self} (t = {time:.17g})", self.index, time)


class SWState(NamedTuple):
    h: float
    q: float


def check_depth(h, where: str = "") -> None:
    h = np.asarray(h)
    bad = ~(h > DEPTH_FLOOR)
    if np.any(bad):
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise NegativeDepthError(
            f"non-positive depth {h.ravel()[idx]:.6g} at index {idx}" + (f" ({where})" if where else ""),
            index=idx,
        )


def flux(U, g: float) -> np.ndarray:
    """Physical flux ``(q, q^2/h + g h^2/2)``."""
    h, q = np.asarray(U[0], dtype=float), np.asarray(U[1], dtype=float)
    check_depth(h, "flux")
    return np.stack([q, q * q / h + 0.5 * g * h * h])


def eigenvalues(U, g: float) -> tuple[np.ndarray, np.ndarray]:
    """Jacobian eigenvalues ``(u - c, u + c)`` with ``c = sqrt(g h)``."""
    h, q = np.asarray(U[0], dtype=float), np.asarray(U[1], dtype=float)
    check_depth(h, "eigenvalues")
    u = q / h
    c = np.sqrt(g * h)
    return u - c, u + c


def jacobian(U, g: float) -> np.ndarray:
    h, q = float(U[0]), float(U[1])
    u = q / h
    return np.array([[0.0, 1.0], [g * h - u * u, 2.0 * u]])


@dataclass(frozen=True)
class CharBasis:
    """Right eigenvectors ``R`` (columns) and ``Rinv`` of the Roe matrix.

    For vectorized input ``R`` and ``Rinv`` have shape ``(2, 2, n)``; the
    transforms broadcast over leading stencil axes of ``V[i]`` with trailing
    length ``n``.
    """

    R: np.ndarray
    Rinv: np.ndarray
    u_hat: np.ndarray
    c_hat: np.ndarray
    h_hat: np.ndarray

    def to_characteristic(self, V) -> np.ndarray:
        V = np.asarray(V, dtype=float)
        Ri = self.Rinv
        return np.stack([Ri[0, 0] * V[0] + Ri[0, 1] * V[1], Ri[1, 0] * V[0] + Ri[1, 1] * V[1]])

    def to_conservative(self, G) -> np.ndarray:
        G = np.asarray(G, dtype=float)
        R = self.R
        return np.stack([R[0, 0] * G[0] + R[0, 1] * G[1], R[1, 0] * G[0] + R[1, 1] * G[1]])


def roe_basis(left, right, g: float) -> CharBasis:
    hl, hr = np.asarray(left[0], dtype=float), np.asarray(right[0], dtype=float)
    check_depth(hl, "roe_basis left")
    check_depth(hr, "roe_basis right")
    ul, ur = np.asarray(left[1]) / hl, np.asarray(right[1]) / hr
    sl, sr = np.sqrt(hl), np.sqrt(hr)
    h_hat = 0.5 * (hl + hr)
    u_hat = (sl * ul + sr * ur) / (sl + sr)
    c_hat = np.sqrt(g * h_hat)
    one = np.ones_like(u_hat)
    R = np.array([[one, one], [u_hat - c_hat, u_hat + c_hat]])
    # Same (u_hat, c_hat) in both matrices so that Rinv @ R = I.
    k = 0.5 / c_hat
    Rinv = np.array([[k * (c_hat + u_hat), -k], [k * (c_hat - u_hat), k * one]])
    return CharBasis(R=R, Rinv=Rinv, u_hat=u_hat, c_hat=c_hat, h_hat=h_hat)


class SpeedPair(NamedTuple):
    a_plus: np.ndarray
    a_minus: np.ndarray


def local_speeds(minus, plus, g: float, floor_at_zero: bool = True) -> SpeedPair:
    """One-sided local speeds from the two states at an interface."""
    lm1, lm2 = eigenvalues(minus, g)
    lp1, lp2 = eigenvalues(plus, g)
    a_plus = np.maximum(lp2, lm2)
    a_minus = np.minimum(lp1, lm1)
    if floor_at_zero:
        a_plus = np.maximum(a_plus, 0.0)
        a_minus = np.minimum(a_minus, 0.0)
    return SpeedPair(a_plus, a_minus)


# isolated shock moving right with unit speed (states satisfy Rankine-Hugoniot for g = 10)
SHOCK_LEFT = SWState(1.0, 0.0)
SHOCK_RIGHT = SWState((-5.0 + 3.0 * np.sqrt(5.0)) / 10.0, (3.0 * np.sqrt(5.0) - 15.0) / 10.0)
SHOCK_X0 = 5.0
SHOCK_SPEED = 1.0


def isolated_shock_exact(x, t: float, g: float = 10.0):
    """Exact isolated-shock solution; returns an :class:`SWState` (arrays for array ``x``)."""
    if g != 10.0:
        raise ValueError("the isolated-shock states satisfy the jump conditions only for g = 10")
    xi = np.asarray(x, dtype=float) - SHOCK_SPEED * t
    left = xi < SHOCK_X0
    h = np.where(left, SHOCK_LEFT.h, SHOCK_RIGHT.h)
    q = np.where(left, SHOCK_LEFT.q, SHOCK_RIGHT.q)
    if h.ndim == 0:
        return SWState(float(h), float(q))
    return SWState(h, q)


def isolated_shock_antiderivative(x, t: float, component: int = 0, x0: float = 0.0):
    """``int_{x0}^{x}`` of one component of the exact isolated-shock solution."""
    s = SHOCK_X0 + SHOCK_SPEED * t
    left_val, right_val = SHOCK_LEFT[component], SHOCK_RIGHT[component]

    def prim(y):
        y = np.asarray(y, dtype=float)
        return np.where(y < s, left_val * y, left_val * s + right_val * (y - s))

    return prim(x) - prim(x0)
