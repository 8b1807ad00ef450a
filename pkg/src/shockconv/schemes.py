"""CU and A-WENO semi-discretizations and the fully discrete RBM step."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .grids import Grid1D, extend


def _dx(grid: Grid1D | float) -> float:
    return float(grid) if isinstance(grid, (int, float)) else grid.dx
from .reconstruction import (
    WenoParams,
    characteristic_interface_values,
    minmod,
    minmod_interface_values,
)
from .swe_model import check_depth, eigenvalues, flux, local_speeds

SCHEMES = ("cu", "rbm", "aweno")
DEGENERATE_SPEED_TOL = 1.0e-10


@dataclass(frozen=True)
class RBMConfig:
    """Artificial-viscosity coefficient ``C`` and the CFL number ``z`` it must stabilize.

    Linear stability needs ``z^2 (4 - z^2) <= C <= 3``.
    """

    C: float = 2.8
    cfl: float = 0.9
    strict: bool = True

    def __post_init__(self) -> None:
        if self.strict:
            z2 = self.cfl * self.cfl
            if not (z2 * (4.0 - z2) <= self.C <= 3.0):
                raise ValueError(
                    f"RBM viscosity C={self.C} violates z^2(4-z^2) <= C <= 3 for z={self.cfl}"
                )


@dataclass(frozen=True)
class SchemeConfig:
    g: float = 10.0
    rbm: RBMConfig = field(default_factory=RBMConfig)
    weno: WenoParams = field(default_factory=WenoParams)
    floor_at_zero: bool = True
    mu: float = 0.2


class SemiDiscreteRHS(NamedTuple):
    dUdt: np.ndarray
    max_speed: float


def central_upwind_flux(Vm, Vp, g: float, anti_diffusion: bool = False, floor_at_zero: bool = True):
    """CU numerical flux at each interface, optionally with the built-in anti-diffusion.

    Returns ``(H, max_speed)``. Where ``a+ - a-`` collapses the flux falls back
    to the plain average of the one-sided fluxes.
    """
    Fm, Fp = flux(Vm, g), flux(Vp, g)
    ap, am = local_speeds(Vm, Vp, g, floor_at_zero)
    width = ap - am
    scale = np.maximum(1.0, np.maximum(np.abs(ap), np.abs(am)))
    degenerate = width < DEGENERATE_SPEED_TOL * scale
    inv = 1.0 / np.where(degenerate, 1.0, width)
    jump = Vp - Vm
    if anti_diffusion:
        Vstar = (ap * Vp - am * Vm - (Fp - Fm)) * inv
        jump = jump - minmod(Vp - Vstar, Vstar - Vm)
    H = (ap * Fm - am * Fp) * inv + (ap * am * inv) * jump
    if np.any(degenerate):
        H = np.where(degenerate, 0.5 * (Fm + Fp), H)
    max_speed = float(np.max(np.maximum(ap, -am)))
    return H, max_speed


def cu_rhs(U: np.ndarray, grid: Grid1D | float, g: float, bc: str = "periodic", floor_at_zero: bool = True) -> SemiDiscreteRHS:
    """Second-order central-upwind right-hand side for the cell averages."""
    check_depth(U[0], "CU input")
    dx = _dx(grid)
    iv = minmod_interface_values(U, dx, bc)
    H, amax = central_upwind_flux(iv.minus, iv.plus, g, floor_at_zero=floor_at_zero)
    return SemiDiscreteRHS(-(H[:, 1:] - H[:, :-1]) / dx, amax)


def fxx_correction(Fs: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order second derivative at interfaces from six-point flux stencils ``Fs[:, 0..5]``."""
    return (
        -5.0 * Fs[:, 0] + 39.0 * Fs[:, 1] - 34.0 * Fs[:, 2] - 34.0 * Fs[:, 3] + 39.0 * Fs[:, 4] - 5.0 * Fs[:, 5]
    ) / (48.0 * dx * dx)


def fxxxx_correction(Fs: np.ndarray, dx: float) -> np.ndarray:
    """Second-order fourth derivative at interfaces from six-point flux stencils."""
    return (
        Fs[:, 0] - 3.0 * Fs[:, 1] + 2.0 * Fs[:, 2] + 2.0 * Fs[:, 3] - 3.0 * Fs[:, 4] + Fs[:, 5]
    ) / (2.0 * dx**4)


def aweno_rhs(
    U: np.ndarray,
    grid: Grid1D | float,
    g: float,
    params: WenoParams = WenoParams(),
    bc: str = "periodic",
    floor_at_zero: bool = True,
) -> SemiDiscreteRHS:
    """Fifth-order A-WENO right-hand side for the point values."""
    check_depth(U[0], "A-WENO input")
    dx = _dx(grid)
    iv = characteristic_interface_values(U, g, params, bc)
    H, amax = central_upwind_flux(iv.minus, iv.plus, g, anti_diffusion=True, floor_at_zero=floor_at_zero)
    Fp = extend(flux(U, g), 3, bc)
    m = U.shape[-1]
    Fs = np.stack([Fp[:, s : s + m + 1] for s in range(6)], axis=1)
    fxx = fxx_correction(Fs, dx)
    fxxxx = fxxxx_correction(Fs, dx)
    dUdt = (
        -(H[:, 1:] - H[:, :-1]) / dx
        + dx / 24.0 * (fxx[:, 1:] - fxx[:, :-1])
        - 7.0 * dx**3 / 5760.0 * (fxxxx[:, 1:] - fxxxx[:, :-1])
    )
    return SemiDiscreteRHS(dUdt, amax)


def fourth_difference(Vp: np.ndarray) -> np.ndarray:
    """Five-point fourth difference of a padded array (drops two entries per side)."""
    return Vp[..., 4:] - 4.0 * Vp[..., 3:-1] + 6.0 * Vp[..., 2:-2] - 4.0 * Vp[..., 1:-3] + Vp[..., :-4]


def max_wave_speed(U: np.ndarray, g: float) -> float:
    lam1, lam2 = eigenvalues(U, g)
    return float(np.max(np.maximum(lam2, -lam1)))


class CFLViolation(ValueError):
    pass


def rbm_step(
    U: np.ndarray,
    grid: Grid1D | float,
    dt: float,
    g: float,
    config: RBMConfig = RBMConfig(),
    bc: str = "periodic",
    check_cfl: bool = True,
) -> np.ndarray:
    """Advance point values by one three-stage RBM step with fourth-difference viscosity."""
    dx = _dx(grid)
    U = np.asarray(U, dtype=float)
    if check_cfl:
        z = dt * max_wave_speed(U, g) / dx
        if z > config.cfl * (1.0 + 1e-12):
            raise CFLViolation(f"RBM step has CFL number {z:.6g} > {config.cfl}")
    m = U.shape[-1]
    w = 3
    Vp = extend(U, w, bc)
    F = flux(Vp, g)
    r = dt / dx
    # stage 1: values at the interfaces between padded cells i and i+1
    V1 = 0.5 * (Vp[:, :-1] + Vp[:, 1:]) - r / 3.0 * (F[:, 1:] - F[:, :-1])
    F1 = flux(V1, g)
    # stage 2: back to the cell centres 1 .. M-2 of the padded array
    V2 = Vp[:, 1:-1] - 2.0 * r / 3.0 * (F1[:, 1:] - F1[:, :-1])
    F2 = flux(V2, g)
    c = slice(w, w + m)
    p = np.arange(w, w + m)
    visc = fourth_difference(Vp)[:, w - 2 : w - 2 + m]
    out = (
        Vp[:, c]
        - r / 24.0 * (7.0 * (F[:, p + 1] - F[:, p - 1]) - 2.0 * (F[:, p + 2] - F[:, p - 2]))
        - 3.0 * r / 8.0 * (F2[:, p] - F2[:, p - 2])
        - config.C / 24.0 * visc
    )
    check_depth(out[0], "RBM update")
    return out
