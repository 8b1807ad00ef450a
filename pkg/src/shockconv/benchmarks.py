"""Initial data for the six shallow-water benchmarks on ``[0, 10]``.

Examples 4-6 repeat 1-3 with the combined schemes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grids import Grid1D
from .swe_model import SHOCK_LEFT, SHOCK_RIGHT, SHOCK_X0, isolated_shock_exact

DOMAIN = (0.0, 10.0)
GAUSS_POINTS = 4


def one_shock(x, g: float = 10.0):
    u = 2.0 * np.sin(np.pi * np.asarray(x, dtype=float) / 5.0 + np.pi / 4.0)
    h = (u + 10.0) ** 2 / (4.0 * g)
    return np.stack([h, h * u])


def two_shocks(x, g: float = 10.0):
    x = np.asarray(x, dtype=float)
    return np.stack([2.0 * np.cos(np.pi * x / 5.0) + 3.0, np.zeros_like(x)])


def isolated_shock(x, g: float = 10.0):
    return np.stack(isolated_shock_exact(np.asarray(x, dtype=float), 0.0, g))


def _two_shocks_averages(grid: Grid1D, g: float) -> np.ndarray:
    xl, xr = grid.interfaces[:-1], grid.interfaces[1:]
    k = np.pi / 5.0
    h = 3.0 + 2.0 * (np.sin(k * xr) - np.sin(k * xl)) / (k * grid.dx)
    return np.stack([h, np.zeros_like(h)])


def _isolated_shock_averages(grid: Grid1D, g: float) -> np.ndarray:
    xl, xr = grid.interfaces[:-1], grid.interfaces[1:]
    frac = np.clip((SHOCK_X0 - xl) / grid.dx, 0.0, 1.0)
    return np.stack([frac * SHOCK_LEFT[i] + (1.0 - frac) * SHOCK_RIGHT[i] for i in range(2)])


@dataclass(frozen=True)
class ExampleSpec:
    id: int
    name: str
    pointwise: Callable[..., np.ndarray]
    bc: str
    snapshot_times: tuple[float, ...]
    mu: float | None = None
    exact_averages: Callable[[Grid1D, float], np.ndarray] | None = None
    has_exact: bool = False

    @property
    def domain(self) -> tuple[float, float]:
        return DOMAIN

    @property
    def combined(self) -> bool:
        return self.id >= 4

    @property
    def base(self) -> ExampleSpec:
        return EXAMPLES[self.id - 3] if self.combined else self


EXAMPLES: dict[int, ExampleSpec] = {
    1: ExampleSpec(1, "one shock", one_shock, "periodic", (0.5, 1.0, 2.5)),
    2: ExampleSpec(2, "two interacting shocks", two_shocks, "periodic", (0.5, 1.0, 2.5),
                   exact_averages=_two_shocks_averages),
    3: ExampleSpec(3, "isolated shock", isolated_shock, "free", (1.0,),
                   exact_averages=_isolated_shock_averages, has_exact=True),
}
EXAMPLES[4] = ExampleSpec(4, "one shock (combined)", one_shock, "periodic", (0.5, 1.0, 2.5), mu=0.2)
EXAMPLES[5] = ExampleSpec(5, "two interacting shocks (combined)", two_shocks, "periodic", (0.5, 1.0, 2.5),
                          mu=0.1, exact_averages=_two_shocks_averages)
EXAMPLES[6] = ExampleSpec(6, "isolated shock (combined)", isolated_shock, "free", (1.0,), mu=0.2,
                          exact_averages=_isolated_shock_averages, has_exact=True)


def get_example(example: int | ExampleSpec) -> ExampleSpec:
    if isinstance(example, ExampleSpec):
        return example
    try:
        return EXAMPLES[int(example)]
    except KeyError:
        raise ValueError(f"unknown example {example!r}; expected 1..6") from None


def make_initial(example, grid: Grid1D, representation: str = "point_value", g: float = 10.0) -> np.ndarray:
    """Initial field of shape ``(2, m)``: cell averages or point values at the centres."""
    ex = get_example(example)
    if representation == "point_value":
        return ex.pointwise(grid.centers, g)
    if representation != "cell_average":
        raise ValueError(f"unknown representation {representation!r}")
    if ex.exact_averages is not None:
        return ex.exact_averages(grid, g)
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    xc = grid.centers
    acc = np.zeros((2, grid.m))
    for xi, wi in zip(nodes, weights):
        acc += 0.5 * wi * ex.pointwise(xc + 0.5 * grid.dx * xi, g)
    return acc


def representation_for(scheme: str) -> str:
    return "cell_average" if scheme == "cu" else "point_value"


def breaking_time_one_shock() -> float:
    """Simple-wave breaking time ``-1 / min d/dx (u + c)`` for the one-shock data."""
    return 5.0 / (3.0 * np.pi)


def one_shock_exact(x, t: float, g: float = 10.0, tol: float = 1e-14):
    """Example 1 solution before breaking, from the straight characteristics of the simple wave.

    ``w1 = u - 2c = -10`` everywhere, so ``u`` is carried along
    ``x = x0 + (5 + 1.5 u0(x0)) t``.
    """
    if t >= breaking_time_one_shock():
        raise ValueError("the simple-wave solution is smooth only before the breaking time")
    x = np.asarray(x, dtype=float)
    k = np.pi / 5.0

    def u0(y):
        return 2.0 * np.sin(k * y + np.pi / 4.0)

    x0 = x - 5.0 * t
    for _ in range(100):
        f = x0 + (5.0 + 1.5 * u0(x0)) * t - x
        df = 1.0 + 3.0 * k * t * np.cos(k * x0 + np.pi / 4.0)
        step = f / df
        x0 = x0 - step
        if np.max(np.abs(step)) < tol:
            break
    u = u0(x0)
    h = (u + 10.0) ** 2 / (4.0 * g)
    return np.stack([h, h * u])
