"""Uniform 1-D meshes and the triple of imbedded refinements (N, 2N, 4N)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LEVELS = ("coarse", "mid", "fine")
_FACTOR = {"coarse": 1, "mid": 2, "fine": 4}


@dataclass(frozen=True)
class Grid1D:
    """Uniform mesh of ``m`` cells on ``[a, b]``."""

    a: float
    b: float
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"number of cells must be positive, got {self.m}")
        if not self.b > self.a:
            raise ValueError(f"degenerate domain [{self.a}, {self.b}]")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.m

    def interface(self, k: int) -> float:
        return self.a + k * self.dx

    def center(self, k: int) -> float:
        return self.a + (k + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return self.a + np.arange(self.m + 1) * self.dx

    @property
    def centers(self) -> np.ndarray:
        return self.a + (np.arange(self.m) + 0.5) * self.dx

    def refined(self, factor: int) -> Grid1D:
        return Grid1D(self.a, self.b, self.m * factor)


@dataclass(frozen=True)
class ImbeddedTriple:
    coarse: Grid1D
    mid: Grid1D
    fine: Grid1D

    @property
    def N(self) -> int:
        return self.coarse.m

    def level(self, name: str) -> Grid1D:
        if name not in _FACTOR:
            raise ValueError(f"unknown level {name!r}; expected one of {LEVELS}")
        return getattr(self, name)

    def __iter__(self):
        return iter((self.coarse, self.mid, self.fine))


def build_triple(a: float, b: float, N: int) -> ImbeddedTriple:
    """Meshes with N, 2N and 4N cells whose coarse interfaces coincide."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    if not b > a:
        raise ValueError(f"degenerate domain [{a}, {b}]")
    return ImbeddedTriple(Grid1D(a, b, N), Grid1D(a, b, 2 * N), Grid1D(a, b, 4 * N))


def coincident_index(triple: ImbeddedTriple, j: int, level: str) -> int:
    """Interface index of the coarse endpoint ``x_{4j}`` on ``level``."""
    if not 0 <= j <= triple.N:
        raise IndexError(f"coarse endpoint index {j} outside 0..{triple.N}")
    if level not in _FACTOR:
        raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")
    return _FACTOR[level] * j


def coarse_samples(values: np.ndarray, factor: int) -> np.ndarray:
    """Restrict per-interface data of a refined level to the coarse endpoints."""
    return np.asarray(values)[..., ::factor]


BOUNDARY_POLICIES = ("periodic", "free")


def extend(U: np.ndarray, width: int, bc: str) -> np.ndarray:
    """Pad the last axis with ``width`` ghost cells on each side.

    ``periodic`` wraps around, ``free`` copies the outermost value.
    """
    if bc not in BOUNDARY_POLICIES:
        raise ValueError(f"unknown boundary policy {bc!r}; expected one of {BOUNDARY_POLICIES}")
    pad = [(0, 0)] * (np.ndim(U) - 1) + [(width, width)]
    return np.pad(U, pad, mode="wrap" if bc == "periodic" else "edge")
