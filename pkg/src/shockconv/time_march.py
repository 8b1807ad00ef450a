"""SSP-RK3 integration, time-step policies and the march driver."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .grids import Grid1D
from .schemes import SchemeConfig, aweno_rhs, cu_rhs, max_wave_speed, rbm_step
from .swe_model import NegativeDepthError

logger = logging.getLogger(__name__)

Stepper = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class StepPolicy:
    """``adaptive`` (CFL rule), ``fixed`` (constant ``dt``) or ``fixed_pow`` (``kappa * dx**exponent``)."""

    mode: str = "adaptive"
    cfl: float = 0.5
    dt: float | None = None
    kappa: float | None = None
    exponent: float = 5.0 / 3.0

    def __post_init__(self) -> None:
        if self.mode == "adaptive":
            if not 0.0 < self.cfl <= 1.0:
                raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        elif self.mode == "fixed":
            if self.dt is None or not self.dt > 0:
                raise ValueError("fixed policy needs dt > 0")
        elif self.mode == "fixed_pow":
            if self.kappa is None or not self.kappa > 0:
                raise ValueError("fixed_pow policy needs kappa > 0")
            if self.exponent < 1:
                raise ValueError("fixed_pow exponent must be >= 1")
        else:
            raise ValueError(f"unknown step policy mode {self.mode!r}")


def ssprk3_step(W: np.ndarray, t: float, dt: float, rhs: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Three-stage third-order SSP Runge-Kutta step; ``rhs(W)`` returns dW/dt."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    W1 = W + dt * rhs(W)
    W2 = 0.75 * W + 0.25 * (W1 + dt * rhs(W1))
    return W / 3.0 + 2.0 / 3.0 * (W2 + dt * rhs(W2))


def choose_dt(
    U: np.ndarray,
    grid: Grid1D,
    g: float,
    policy: StepPolicy,
    t: float = 0.0,
    t_final: float = np.inf,
) -> float:
    if policy.mode == "adaptive":
        a = max_wave_speed(U, g)
        if a <= 0.0:
            raise ValueError("stationary field has zero wave speed; use a fixed time step")
        dt = policy.cfl * grid.dx / a
    elif policy.mode == "fixed":
        dt = policy.dt
    else:
        dt = policy.kappa * grid.dx**policy.exponent
    remaining = t_final - t
    if dt >= remaining:
        dt = remaining
    return dt


def fixed_step_for_triple(U_fine: np.ndarray, dx_fine: float, g: float, nu: float = 0.25) -> float:
    """Shared step ``nu * dx_fine / a0`` with ``a0`` from the finest initial data."""
    return nu * dx_fine / max_wave_speed(U_fine, g)


def kappa_for_pow(U: np.ndarray, dx_coarse: float, g: float, cfl: float = 0.5, exponent: float = 5.0 / 3.0) -> float:
    """``kappa`` such that ``kappa * dx_coarse**exponent`` has CFL number ``cfl`` on the coarse mesh."""
    return cfl * dx_coarse ** (1.0 - exponent) / max_wave_speed(U, g)


def convergence_policy(
    scheme: str, grid: Grid1D, a0: float, dx_coarse: float, nu: float = 0.25, cfl_coarse: float = 0.5
) -> StepPolicy:
    """Constant per-grid step for convergence studies.

    CU and RBM use ``nu * dx / a0``. A-WENO uses ``kappa * dx**(5/3)`` so the
    temporal error stays below the spatial one; ``kappa`` gives CFL number
    ``cfl_coarse`` on the coarsest grid. ``a0`` is the largest initial wave
    speed on the finest grid.
    """
    if not a0 > 0:
        raise ValueError("a0 must be positive")
    if scheme == "aweno":
        return StepPolicy("fixed_pow", kappa=cfl_coarse * dx_coarse ** (-2.0 / 3.0) / a0)
    if scheme in ("cu", "rbm"):
        return StepPolicy("fixed", dt=nu * grid.dx / a0)
    raise ValueError(f"unknown scheme {scheme!r}")


def make_stepper(scheme: str, grid: Grid1D, config: SchemeConfig = SchemeConfig(), bc: str = "periodic") -> Stepper:
    g = config.g
    if scheme == "cu":
        def rhs(W):
            return cu_rhs(W, grid, g, bc, config.floor_at_zero).dUdt
        return lambda U, dt: ssprk3_step(U, 0.0, dt, rhs)
    if scheme == "aweno":
        def rhs(W):
            return aweno_rhs(W, grid, g, config.weno, bc, config.floor_at_zero).dUdt
        return lambda U, dt: ssprk3_step(U, 0.0, dt, rhs)
    if scheme == "rbm":
        return lambda U, dt: rbm_step(U, grid, dt, g, config.rbm, bc)
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass
class TrajectoryRecord:
    times: list[float] = field(default_factory=list)
    snapshots: dict[float, np.ndarray] = field(default_factory=dict)
    steps: int = 0

    def at(self, t: float) -> np.ndarray:
        for s, U in self.snapshots.items():
            if abs(s - t) <= 1e-14 * max(1.0, abs(t)):
                return U
        raise KeyError(f"no snapshot stored at t = {t}")

    @property
    def final(self) -> np.ndarray:
        return self.snapshots[max(self.snapshots)]


def _targets(t_final: float, snapshot_times: Sequence[float]) -> list[float]:
    snaps = [float(s) for s in snapshot_times]
    if any(b < a for a, b in zip(snaps, snaps[1:])):
        raise ValueError("snapshot times must be sorted")
    if snaps and (snaps[0] < 0 or snaps[-1] > t_final):
        raise ValueError("snapshot times must lie in [0, t_final]")
    return sorted(set(snaps) | {float(t_final)})


def march(
    initial: np.ndarray,
    grid: Grid1D,
    scheme: str,
    policy: StepPolicy,
    t_final: float,
    snapshot_times: Sequence[float] = (),
    config: SchemeConfig = SchemeConfig(),
    bc: str = "periodic",
    stepper: Stepper | None = None,
) -> TrajectoryRecord:
    """Advance ``initial`` to ``t_final``, landing exactly on every snapshot time."""
    step = stepper or make_stepper(scheme, grid, config, bc)
    U = np.array(initial, dtype=float)
    rec = TrajectoryRecord(times=[0.0])
    t = 0.0
    for target in _targets(t_final, snapshot_times):
        while t < target:
            dt = choose_dt(U, grid, config.g, policy, t, target)
            try:
                U = step(U, dt)
            except NegativeDepthError as err:
                raise err.at_time(t) from err
            rec.steps += 1
            # land exactly on the target after the clipped step
            t = target if dt == target - t else t + dt
            rec.times.append(t)
        rec.snapshots[target] = U.copy()
    logger.debug("%s: %d steps to t=%g on %d cells", scheme, rec.steps, t_final, grid.m)
    return rec
