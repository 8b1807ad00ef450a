"""RBM-CU and RBM-A-WENO combined schemes.

The RBM (basic) solution is evolved on the whole domain and never modified.
Rough points are detected from its weak local residual (WLR); there a copy
evolved by the internal CU or A-WENO scheme replaces the exported values.
Internal stages read their stencil values outside the evolved set from the
basic solution at ``t^n``, ``t^{n+1/2}`` and ``t^{n+1}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .grids import Grid1D, extend
from .schemes import CFLViolation, SchemeConfig, aweno_rhs, cu_rhs, max_wave_speed, rbm_step
from .swe_model import NegativeDepthError, check_depth, flux
from .time_march import TrajectoryRecord, _targets

logger = logging.getLogger(__name__)

INTERNAL_SCHEMES = ("cu", "aweno")
STENCIL_RADIUS = {"cu": 2, "aweno": 3}
RBM_RADIUS = 2
INTERNAL_CFL = 0.5


@dataclass(frozen=True)
class WLRField:
    E: np.ndarray  # (2, m) residual at every point value
    eps: np.ndarray  # (m,) three-point max of |E| for the detection component


def time_weights(a: float, b: float) -> tuple[float, float, float]:
    """Weights on ``t^n - a, t^n, t^n + b`` integrating quadratics over that span; Simpson when a = b."""
    if not (a > 0 and b > 0):
        raise ValueError("time steps must be positive")
    if a == b:
        return a / 3.0, 4.0 * a / 3.0, a / 3.0
    s = a + b
    return s * (2.0 * a - b) / (6.0 * a), s**3 / (6.0 * a * b), s * (2.0 * b - a) / (6.0 * b)


def weak_local_residual(
    V_prev: np.ndarray,
    V_now: np.ndarray,
    V_next: np.ndarray,
    dx: float,
    dt: float,
    g: float,
    bc: str = "periodic",
    dt_prev: float | None = None,
    component: int = 0,
) -> WLRField:
    """Weak local residual of three consecutive time levels.

    ``dt`` is ``t^{n+1} - t^n``; ``dt_prev`` (default ``dt``) is
    ``t^n - t^{n-1}``. Unequal steps switch the time quadrature to the
    three-point rule exact on quadratics over the uneven pair of intervals.
    """
    V_prev, V_now, V_next = (np.asarray(V, dtype=float) for V in (V_prev, V_now, V_next))
    if not V_prev.shape == V_now.shape == V_next.shape:
        raise ValueError("time levels must live on the same grid")
    w_prev, w_now, w_next = time_weights(dt if dt_prev is None else dt_prev, dt)
    m = V_now.shape[-1]
    dV = extend(V_next - V_prev, 1, bc)
    Fp = [extend(flux(V, g), 1, bc) for V in (V_prev, V_now, V_next)]
    dF = [F[:, 2 : m + 2] - F[:, 0:m] for F in Fp]
    space = (dV[:, 0:m] + 4.0 * dV[:, 1 : m + 1] + dV[:, 2 : m + 2]) * (dx / 3.0)
    time = w_prev * dF[0] + w_now * dF[1] + w_next * dF[2]
    E = 0.25 * (space + time)
    absE = extend(np.abs(E[component]), 1, bc)
    eps = np.maximum(np.maximum(absE[0:m], absE[1 : m + 1]), absE[2 : m + 2])
    return WLRField(E, eps)


def dilate(mask: np.ndarray, radius: int, bc: str = "periodic") -> np.ndarray:
    """Grow a boolean mask by ``radius`` points on each side (wrapping if periodic)."""
    mask = np.asarray(mask, dtype=bool)
    if radius <= 0 or not mask.any():
        return mask.copy()
    out = mask.copy()
    m = len(mask)
    for s in range(1, radius + 1):
        if bc == "periodic":
            out |= np.roll(mask, s) | np.roll(mask, -s)
        else:
            out[s:] |= mask[: m - s]
            out[: m - s] |= mask[s:]
    return out


@dataclass(frozen=True)
class RoughSet:
    core: np.ndarray  # points with eps > mu dx^3
    halo: np.ndarray  # core dilated by the internal stencil radius
    boundary_belt: np.ndarray  # halo without the core

    @property
    def empty(self) -> bool:
        return not self.core.any()

    @property
    def core_indices(self) -> np.ndarray:
        return np.flatnonzero(self.core)


def detect_rough(wlr: WLRField, mu: float, dx: float, stencil_radius: int, bc: str = "periodic") -> RoughSet:
    if not mu > 0:
        raise ValueError("threshold mu must be positive")
    core = wlr.eps > mu * dx**3
    halo = dilate(core, stencil_radius, bc)
    return RoughSet(core, halo, halo & ~core)


@dataclass(frozen=True)
class _Window:
    run: np.ndarray  # points of the run (global indices)
    idx: np.ndarray  # run plus margin (global indices, wrapped or clamped)
    inner: slice  # position of the run inside idx


def _runs(mask: np.ndarray, bc: str) -> list[np.ndarray]:
    """Contiguous runs of a boolean mask, joined across the periodic seam."""
    m = len(mask)
    if mask.all():
        return [np.arange(m)]
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1) + 1
    runs = np.split(idx, breaks)
    if bc == "periodic" and len(runs) > 1 and runs[0][0] == 0 and runs[-1][-1] == m - 1:
        runs = [np.concatenate([runs[-1], runs[0]])] + runs[1:-1]
    return runs


def _windows(mask: np.ndarray, margin: int, bc: str) -> list[_Window]:
    m = len(mask)
    out = []
    for run in _runs(mask, bc):
        start = run[0]
        length = len(run)
        if length + 2 * margin >= m and bc == "periodic":
            return [_Window(np.arange(m), np.arange(m), slice(0, m))]
        idx = start - margin + np.arange(length + 2 * margin)
        idx = idx % m if bc == "periodic" else np.clip(idx, 0, m - 1)
        out.append(_Window(run, idx, slice(margin, margin + length)))
    return out


@dataclass
class CombinedState:
    """Basic RBM levels ``t^{n-1}``, ``t^n`` plus the internal copy on its evolved set."""

    basic_prev: np.ndarray | None
    basic: np.ndarray
    internal: np.ndarray | None = None  # (2, m), meaningful where internal_mask
    internal_mask: np.ndarray | None = None
    exported: np.ndarray | None = None
    rough: RoughSet | None = None
    t: float = 0.0
    dt_prev: float | None = None
    mu: float = 0.2
    internal_kind: str = "cu"

    def __post_init__(self) -> None:
        if self.internal_kind not in INTERNAL_SCHEMES:
            raise ValueError(f"internal scheme must be one of {INTERNAL_SCHEMES}")
        if self.exported is None:
            self.exported = self.basic


def _internal_rhs(kind: str, dx: float, config: SchemeConfig):
    if kind == "cu":
        return lambda U: cu_rhs(U, dx, config.g, "free", config.floor_at_zero).dUdt
    return lambda U: aweno_rhs(U, dx, config.g, config.weno, "free", config.floor_at_zero).dUdt


def _local(op, X: np.ndarray, windows: list[_Window], bc: str) -> np.ndarray:
    """Apply a local operator window by window; NaN outside the windows' runs."""
    out = np.full_like(X, np.nan)
    for w in windows:
        if len(w.idx) == X.shape[-1] and w.inner == slice(0, X.shape[-1]):
            out[:, w.run] = op(X, bc)
        else:
            out[:, w.run] = op(X[:, w.idx], "free")[:, w.inner]
    return out


def combined_step(
    state: CombinedState,
    dt: float,
    grid: Grid1D,
    config: SchemeConfig = SchemeConfig(),
    bc: str = "periodic",
) -> CombinedState:
    """One step of the combined scheme from ``t^n`` to ``t^n + dt``."""
    dx, g = grid.dx, config.g
    V_now = state.basic
    a = max_wave_speed(V_now, g)
    if dt * a / dx > INTERNAL_CFL * (1.0 + 1e-12):
        raise CFLViolation(f"combined step CFL {dt * a / dx:.6g} exceeds {INTERNAL_CFL}")
    V_next = rbm_step(V_now, grid, dt, g, config.rbm, bc)
    t_next = state.t + dt
    if state.basic_prev is None:
        # bootstrap: three basic levels are needed before the first detection
        return replace(state, basic_prev=V_now, basic=V_next, exported=V_next, t=t_next, dt_prev=dt,
                       internal=None, internal_mask=None, rough=None)

    wlr = weak_local_residual(state.basic_prev, V_now, V_next, dx, dt, g, bc, state.dt_prev)
    radius = STENCIL_RADIUS[state.internal_kind]
    rough = detect_rough(wlr, state.mu, dx, radius, bc)
    if rough.empty:
        return replace(state, basic_prev=V_now, basic=V_next, exported=V_next, t=t_next, dt_prev=dt,
                       internal=None, internal_mask=None, rough=rough)

    active = dilate(rough.core, 1, bc)
    vicinity = dilate(active, radius, bc)

    def rbm_half(X, wbc):
        return rbm_step(X, grid, 0.5 * dt, g, config.rbm, wbc)

    V_half = _local(rbm_half, V_now, _windows(vicinity, RBM_RADIUS + 1, bc), bc)

    W0 = V_now.copy()
    if state.internal is not None:
        keep = rough.core & state.internal_mask
        W0[:, keep] = state.internal[:, keep]

    rhs = _internal_rhs(state.internal_kind, dx, config)
    windows = _windows(active, radius, bc)

    def P(W, V_level):
        X = np.where(active, W, V_level)
        return _local(lambda Y, wbc: _rhs_bc(rhs, state.internal_kind, dx, config, Y, wbc), X, windows, bc)

    try:
        W1 = W0 + dt * P(W0, V_now)
        W2 = 0.75 * W0 + 0.25 * (W1 + dt * P(W1, V_next))
        W3 = W0 / 3.0 + 2.0 / 3.0 * (W2 + dt * P(W2, V_half))
        check_depth(W3[0][active], "internal scheme")
    except NegativeDepthError as err:
        raise err.at_time(state.t) from err

    exported = V_next.copy()
    exported[:, rough.core] = W3[:, rough.core]
    return replace(state, basic_prev=V_now, basic=V_next, internal=np.where(active, W3, np.nan),
                   internal_mask=active, exported=exported, rough=rough, t=t_next, dt_prev=dt)


def _rhs_bc(rhs, kind: str, dx: float, config: SchemeConfig, Y: np.ndarray, wbc: str) -> np.ndarray:
    if wbc == "free":
        return rhs(Y)
    if kind == "cu":
        return cu_rhs(Y, dx, config.g, wbc, config.floor_at_zero).dUdt
    return aweno_rhs(Y, dx, config.g, config.weno, wbc, config.floor_at_zero).dUdt


def uniform_steps(t0: float, target: float, dt_max: float) -> tuple[int, float]:
    """Number and size of equal steps landing exactly on ``target``."""
    n = max(1, int(np.ceil((target - t0) / dt_max - 1e-12)))
    return n, (target - t0) / n


@dataclass
class CombinedRun:
    exported: TrajectoryRecord
    basic: TrajectoryRecord
    dts: list[float] = field(default_factory=list)
    core_sizes: list[int] = field(default_factory=list)
    final_state: CombinedState | None = None


def run_combined(
    initial: np.ndarray,
    grid: Grid1D,
    internal: str,
    dt: float,
    t_final: float,
    snapshot_times: Sequence[float] = (),
    config: SchemeConfig = SchemeConfig(),
    bc: str = "periodic",
    mu: float | None = None,
) -> CombinedRun:
    """March the combined scheme with (nearly) constant steps of at most ``dt``.

    Every interval between snapshot times is split into equal steps so the
    WLR always sees (almost) uniform time levels.
    """
    state = CombinedState(None, np.array(initial, dtype=float), mu=config.mu if mu is None else mu,
                          internal_kind=internal)
    run = CombinedRun(TrajectoryRecord(times=[0.0]), TrajectoryRecord(times=[0.0]))
    t = 0.0
    for target in _targets(t_final, snapshot_times):
        if target > t:
            n, h = uniform_steps(t, target, dt)
            for k in range(n):
                state = combined_step(state, h, grid, config, bc)
                run.dts.append(h)
                run.core_sizes.append(0 if state.rough is None else int(state.rough.core.sum()))
                t = target if k == n - 1 else state.t
                state.t = t
                run.exported.times.append(t)
                run.basic.times.append(t)
            run.exported.steps = run.basic.steps = len(run.dts)
        run.exported.snapshots[target] = state.exported.copy()
        run.basic.snapshots[target] = state.basic.copy()
    run.final_state = state
    logger.debug("combined %s: %d steps, max core %d", internal, len(run.dts), max(run.core_sizes, default=0))
    return run
