"""One-sided interface values: minmod piecewise-linear and WENO-Z.

All routines work on padded-free cell arrays ``U`` of shape ``(2, m)`` and
return values at the ``m + 1`` interfaces ``x_0 .. x_m``; ``minus`` is the
limit from the left cell, ``plus`` from the right cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .grids import extend
from .swe_model import check_depth, roe_basis


class InterfaceValues(NamedTuple):
    minus: np.ndarray
    plus: np.ndarray


def minmod(z1, z2):
    return 0.5 * (np.sign(z1) + np.sign(z2)) * np.minimum(np.abs(z1), np.abs(z2))


def minmod_slopes(Vp: np.ndarray, dx: float) -> np.ndarray:
    """Limited slopes of the interior entries of a padded array (drops one cell per side)."""
    return minmod(Vp[..., 1:-1] - Vp[..., :-2], Vp[..., 2:] - Vp[..., 1:-1]) / dx


def minmod_interface_values(U: np.ndarray, dx: float, bc: str = "periodic", check: bool = True) -> InterfaceValues:
    Up = extend(np.asarray(U, dtype=float), 2, bc)
    m = Up.shape[-1] - 4
    s = minmod_slopes(Up, dx)  # cells -1 .. m
    minus = Up[..., 1 : m + 2] + 0.5 * dx * s[..., 0 : m + 1]
    plus = Up[..., 2 : m + 3] - 0.5 * dx * s[..., 1 : m + 2]
    if check and minus.ndim > 1:
        check_depth(minus[0], "minmod reconstruction, left side")
        check_depth(plus[0], "minmod reconstruction, right side")
    return InterfaceValues(minus, plus)


@dataclass(frozen=True)
class WenoParams:
    p: int = 2
    eps: float = 1.0e-12
    d: tuple[float, float, float] = field(default=(1.0 / 16.0, 5.0 / 8.0, 5.0 / 16.0))

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("WENO-Z power p must be a positive integer")
        if not self.eps > 0:
            raise ValueError("WENO-Z eps must be positive")
        if abs(sum(self.d) - 1.0) > 1e-14:
            raise ValueError("linear weights must sum to one")


def candidate_values(v0, v1, v2, v3, v4):
    """Three parabolic interpolants evaluated at the interface (left-biased)."""
    P0 = 0.375 * v0 - 1.25 * v1 + 1.875 * v2
    P1 = -0.125 * v1 + 0.75 * v2 + 0.375 * v3
    P2 = 0.375 * v2 + 0.75 * v3 - 0.125 * v4
    return P0, P1, P2


def smoothness_indicators(v0, v1, v2, v3, v4):
    b0 = 13.0 / 12.0 * (v0 - 2.0 * v1 + v2) ** 2 + 0.25 * (v0 - 4.0 * v1 + 3.0 * v2) ** 2
    b1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - v3) ** 2
    b2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (3.0 * v2 - 4.0 * v3 + v4) ** 2
    return b0, b1, b2


def wenoz_weights(v0, v1, v2, v3, v4, params: WenoParams = WenoParams()):
    b0, b1, b2 = smoothness_indicators(v0, v1, v2, v3, v4)
    tau5 = np.abs(b2 - b0)
    d0, d1, d2 = params.d
    a0 = d0 * (1.0 + (tau5 / (b0 + params.eps)) ** params.p)
    a1 = d1 * (1.0 + (tau5 / (b1 + params.eps)) ** params.p)
    a2 = d2 * (1.0 + (tau5 / (b2 + params.eps)) ** params.p)
    s = a0 + a1 + a2
    return a0 / s, a1 / s, a2 / s


def wenoz_interpolate(six, params: WenoParams = WenoParams(), side: str = "minus"):
    """WENO-Z value at the interface centred in a six-point stencil.

    ``six[k]`` holds the values at ``x_{j-5/2} .. x_{j+5/2}``; extra trailing
    axes are vectorized over. The plus side reuses the minus-side formulas on
    the reflected stencil.
    """
    six = np.asarray(six, dtype=float)
    if six.shape[0] != 6:
        raise ValueError("WENO-Z stencil needs exactly six values")
    if side == "minus":
        v = six[0:5]
    elif side == "plus":
        v = six[5:0:-1]
    else:
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")
    w0, w1, w2 = wenoz_weights(*v, params=params)
    P0, P1, P2 = candidate_values(*v)
    return w0 * P0 + w1 * P1 + w2 * P2


def stencils(U: np.ndarray, bc: str) -> np.ndarray:
    """Six-point stencils around every interface, shape ``(2, 6, m + 1)``."""
    Up = extend(np.asarray(U, dtype=float), 3, bc)
    m = Up.shape[-1] - 6
    return np.stack([Up[:, s : s + m + 1] for s in range(6)], axis=1)


def characteristic_interface_values(
    U: np.ndarray, g: float, params: WenoParams = WenoParams(), bc: str = "periodic", check: bool = True
) -> InterfaceValues:
    """WENO-Z applied to local characteristic variables at every interface."""
    S = stencils(U, bc)
    basis = roe_basis(S[:, 2], S[:, 3], g)
    G = basis.to_characteristic(S)
    # both sides in one pass: the plus side is the reflected stencil
    v = np.stack([G[:, 0:5], G[:, 5:0:-1]], axis=2)  # (component, point, side, interface)
    v = tuple(v[:, k] for k in range(5))
    w0, w1, w2 = wenoz_weights(*v, params=params)
    P0, P1, P2 = candidate_values(*v)
    Gs = w0 * P0 + w1 * P1 + w2 * P2
    minus = basis.to_conservative(Gs[:, 0])
    plus = basis.to_conservative(Gs[:, 1])
    if check:
        check_depth(minus[0], "WENO-Z interpolation, left side")
        check_depth(plus[0], "WENO-Z interpolation, right side")
    return InterfaceValues(minus, plus)
