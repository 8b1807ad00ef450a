"""Experimental convergence rates on three imbedded grids.

Pointwise (Runge) rates, 25-point averaged rates, integral rates of the
anti-derivatives and the global W^{-1,1} rate, plus their variants against an
exact solution. Undefined rates (0/0 in constant regions) are reported as NaN.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .grids import Grid1D, extend
from .reconstruction import WenoParams, characteristic_interface_values, minmod_interface_values

QUAD_WEIGHTS = np.array([-17.0, 308.0, 5178.0, 308.0, -17.0]) / 5760.0
UNDEFINED_TOL = 1.0e-13


def interface_point_values(
    U: np.ndarray,
    grid: Grid1D,
    scheme: str,
    g: float = 10.0,
    bc: str = "periodic",
    params: WenoParams = WenoParams(),
) -> np.ndarray:
    """Average of the two one-sided values at every interface, shape ``(2, m + 1)``.

    The CU path uses the minmod reconstruction of the cell averages; every
    point-value scheme (RBM, A-WENO and the combined ones) uses characteristic
    WENO-Z as post-processing.
    """
    if scheme == "cu":
        iv = minmod_interface_values(U, grid.dx, bc)
    else:
        iv = characteristic_interface_values(U, g, params, bc)
    return 0.5 * (iv.minus + iv.plus)


def interface_point_value(U, grid: Grid1D, j: int, scheme: str, g: float = 10.0, bc: str = "periodic",
                          params: WenoParams = WenoParams(), component: int = 0) -> float:
    return float(interface_point_values(U, grid, scheme, g, bc, params)[component, j])


@dataclass(frozen=True)
class TripleSample:
    """One scalar per coarse endpoint ``x_{4j}`` from each of the three levels."""

    coarse: np.ndarray
    mid: np.ndarray
    fine: np.ndarray
    kind: str = "point_runge"

    def __post_init__(self) -> None:
        n = len(self.coarse)
        if len(self.mid) != n or len(self.fine) != n:
            raise ValueError("triple samples must share the coarse endpoints")

    @classmethod
    def from_levels(cls, coarse, mid, fine, kind: str = "point_runge") -> TripleSample:
        """Restrict per-interface arrays (lengths N+1, 2N+1, 4N+1) to the coarse endpoints."""
        coarse, mid, fine = (np.asarray(v, dtype=float) for v in (coarse, mid, fine))
        if (len(mid) - 1) != 2 * (len(coarse) - 1) or (len(fine) - 1) != 4 * (len(coarse) - 1):
            raise ValueError("levels are not an imbedded N / 2N / 4N triple")
        return cls(coarse, mid[::2], fine[::4], kind)


def runge_ratio_rate(num, den, tol: float = UNDEFINED_TOL) -> np.ndarray:
    """``log_{1/2} |num / den|`` with NaN where the ratio cannot be measured."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    undefined = (np.abs(den) < tol * np.maximum(1.0, np.abs(num))) | (num == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = -np.log2(np.abs(num) / np.abs(den))
    return np.where(undefined | ~np.isfinite(r), np.nan, r)


def runge_pointwise(sample: TripleSample, tol: float = UNDEFINED_TOL) -> np.ndarray:
    return runge_ratio_rate(sample.mid - sample.fine, sample.coarse - sample.mid, tol)


def averaged_rate(r, window_halfwidth: int = 12, bc: str = "periodic") -> np.ndarray:
    """Mean of the rates over ``2 * window_halfwidth + 1`` neighbours.

    ``periodic`` treats entries ``0..N-1`` as one period (entry ``N`` repeats
    entry 0); ``clamped`` truncates the window at the ends. Undefined entries
    are skipped; a window without defined entries gives NaN.
    """
    r = np.asarray(r, dtype=float)
    n = len(r)
    offsets = np.arange(-window_halfwidth, window_halfwidth + 1)
    idx = np.arange(n)[:, None] + offsets[None, :]
    if bc == "periodic":
        period = n - 1
        vals = r[:period][idx % period]
    elif bc == "clamped":
        valid = (idx >= 0) & (idx < n)
        vals = np.where(valid, r[np.clip(idx, 0, n - 1)], np.nan)
    else:
        raise ValueError(f"unknown averaging policy {bc!r}")
    defined = np.isfinite(vals)
    count = defined.sum(axis=1)
    total = np.where(defined, vals, 0.0).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(count > 0, total / np.maximum(count, 1), np.nan)


def quadrature_L(values, dx: float):
    """Integral over one cell from five point values at unit stride around its centre."""
    values = np.asarray(values, dtype=float)
    return dx * np.tensordot(QUAD_WEIGHTS, values, axes=(0, 0))


def cell_integrals(values: np.ndarray, grid: Grid1D, scheme: str, bc: str = "periodic") -> np.ndarray:
    """Integral of one component over every cell of ``grid``."""
    values = np.asarray(values, dtype=float)
    if scheme == "cu":
        return grid.dx * values
    vp = extend(values, 2, bc)
    m = grid.m
    return quadrature_L(np.stack([vp[s : s + m] for s in range(5)]), grid.dx)


def antiderivative_sequence(values: np.ndarray, grid: Grid1D, scheme: str, bc: str = "periodic", factor: int = 1) -> np.ndarray:
    """Approximate anti-derivative ``I`` at the interfaces, restricted to every ``factor``-th one.

    ``values`` are cell averages for CU and point values otherwise. With
    ``factor`` 1/2/4 on the coarse/mid/fine member of a triple the result lives
    on the shared coarse endpoints.
    """
    J = cell_integrals(values, grid, scheme, bc)
    if grid.m % factor:
        raise ValueError("grid is not a refinement of the requested coarse level")
    J = J.reshape(-1, factor).sum(axis=1)
    return np.concatenate([[0.0], np.cumsum(J)])


def integral_rates(I_coarse, I_mid, I_fine, tol: float = UNDEFINED_TOL) -> np.ndarray:
    r = runge_pointwise(TripleSample(np.asarray(I_coarse), np.asarray(I_mid), np.asarray(I_fine), "antiderivative"), tol)
    r[0] = np.nan  # I_0 = 0 on every level
    return r


def discrete_l1(psi, dx_coarse: float) -> float:
    """``4 dx (|psi_4| + ... + |psi_4N|)``: coarse cell width times the sum over j = 1..N."""
    return float(dx_coarse * np.sum(np.abs(np.asarray(psi)[1:])))


def w11_rate(I_coarse, I_mid, I_fine, dx_coarse: float) -> tuple[float, tuple[float, float]]:
    """Global W^{-1,1} rate and the norms ``(||I^N - I^2N||, ||I^2N - I^4N||)``."""
    e_coarse = discrete_l1(np.asarray(I_coarse) - np.asarray(I_mid), dx_coarse)
    e_fine = discrete_l1(np.asarray(I_mid) - np.asarray(I_fine), dx_coarse)
    rate = float(runge_ratio_rate(e_fine, e_coarse))
    return rate, (e_coarse, e_fine)


@dataclass
class RateReport:
    x: np.ndarray
    pointwise: np.ndarray
    averaged: np.ndarray
    integral: np.ndarray
    w11_rate: float
    w11_errors: tuple[float, float]
    extra: dict = field(default_factory=dict)

    def subsampled(self, npoints: int = 51) -> dict[str, np.ndarray]:
        idx = subsample_indices(len(self.x), npoints)
        return {"x": self.x[idx], "r": self.pointwise[idx], "r_ave": self.averaged[idx], "r_int": self.integral[idx]}


def subsample_indices(n: int, npoints: int = 51) -> np.ndarray:
    """Every ``(n-1)/(npoints-1)``-th coarse endpoint (``r_{160k}`` for N = 2000)."""
    stride = max(1, (n - 1) // (npoints - 1))
    return np.arange(0, n, stride)


def triple_report(
    fields: Sequence[np.ndarray],
    grids: Sequence[Grid1D],
    scheme: str,
    g: float = 10.0,
    bc: str = "periodic",
    params: WenoParams = WenoParams(),
    component: int = 0,
    average_bc: str | None = None,
) -> RateReport:
    """All rate families for one component from a coarse / mid / fine triple of solutions."""
    coarse = grids[0]
    pts = [interface_point_values(U, gr, scheme, g, bc, params)[component] for U, gr in zip(fields, grids)]
    sample = TripleSample.from_levels(*pts)
    r = runge_pointwise(sample)
    ave = averaged_rate(r, bc=average_bc or ("periodic" if bc == "periodic" else "clamped"))
    Is = [antiderivative_sequence(U[component], gr, scheme, bc, factor=gr.m // coarse.m) for U, gr in zip(fields, grids)]
    r_int = integral_rates(*Is)
    rate, errs = w11_rate(*Is, dx_coarse=coarse.dx)
    return RateReport(coarse.interfaces, r, ave, r_int, rate, errs, extra={"I": Is, "samples": sample})


def rates_vs_exact(
    fields: Sequence[np.ndarray],
    grids: Sequence[Grid1D],
    scheme: str,
    exact_values: Callable[[np.ndarray], np.ndarray],
    exact_antiderivative: Callable[[np.ndarray], np.ndarray],
    g: float = 10.0,
    bc: str = "free",
    params: WenoParams = WenoParams(),
    component: int = 0,
) -> RateReport:
    """Rates of a coarse / fine pair (N, 2N) measured against an exact solution.

    Both evaluators take the coarse endpoint coordinates and return one
    component of the exact solution / its anti-derivative from the left end.
    """
    coarse, fine = grids
    if fine.m != 2 * coarse.m:
        raise ValueError("exact-reference rates need an N / 2N pair")
    x = coarse.interfaces
    pts = [interface_point_values(U, gr, scheme, g, bc, params)[component][:: gr.m // coarse.m] for U, gr in zip(fields, grids)]
    ex = np.asarray(exact_values(x), dtype=float)
    r = runge_ratio_rate(pts[1] - ex, pts[0] - ex)
    ave = averaged_rate(r, bc="clamped")
    Is = [antiderivative_sequence(U[component], gr, scheme, bc, factor=gr.m // coarse.m) for U, gr in zip(fields, grids)]
    I_ex = np.asarray(exact_antiderivative(x), dtype=float)
    r_int = runge_ratio_rate(Is[1] - I_ex, Is[0] - I_ex)
    r_int[0] = np.nan
    e_coarse = discrete_l1(Is[0] - I_ex, coarse.dx)
    e_fine = discrete_l1(Is[1] - I_ex, coarse.dx)
    rate = float(runge_ratio_rate(e_fine, e_coarse))
    return RateReport(x, r, ave, r_int, rate, (e_coarse, e_fine), extra={"I": Is, "I_exact": I_ex})
