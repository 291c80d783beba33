"""Uniform grids on [0, T] and sampled C^1 functions living on them.

Values and first derivatives are carried as separate arrays: derivatives are
always known in closed form wherever this package builds a function, so they
are never reconstructed by differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def _locked(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid:
    """n equal intervals on [0, T]; n + 1 nodes including both endpoints."""

    T: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"horizon must be positive and finite, got {self.T!r}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"interval count must be an integer >= 2, got {self.n!r}")

    @property
    def h(self) -> float:
        return self.T / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        return _locked(np.linspace(0.0, self.T, self.n + 1))


@dataclass(frozen=True)
class GridFunction:
    """A sampled C^1 function: values u(t_i) and derivatives u'(t_i).

    Arrays are copied on construction and marked read-only.
    """

    grid: Grid
    values: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        vals = _locked(self.values)
        ders = _locked(self.derivs)
        want = (self.grid.n + 1,)
        if vals.shape != want or ders.shape != want:
            raise ValueError(
                f"need {want[0]} samples, got values {vals.shape} derivs {ders.shape}")
        if not (np.isfinite(vals).all() and np.isfinite(ders).all()):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "derivs", ders)

    @classmethod
    def from_callables(cls, grid: Grid, u, du) -> "GridFunction":
        t = grid.nodes
        return cls(grid, np.broadcast_to(np.asarray(u(t), dtype=float), t.shape),
                   np.broadcast_to(np.asarray(du(t), dtype=float), t.shape))


def integrate(grid: Grid, values) -> float:
    """Integral of nodal values over [0, T].

    Composite Simpson when the interval count is even, composite trapezoid
    otherwise.  Exact through cubics on the Simpson branch.
    """
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.n + 1,):
        raise ValueError(f"expected {grid.n + 1} samples, got shape {v.shape}")
    h = grid.h
    if grid.n % 2 == 0:
        w = np.ones_like(v)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return float((h / 3.0) * (w @ v))
    return float(np.trapezoid(v, dx=h))


def norm_sup(values) -> float:
    v = np.asarray(values, dtype=float)
    return float(np.abs(v).max())


def norm_c1(u: GridFunction) -> float:
    """sup|u| + sup|u'|."""
    return norm_sup(u.values) + norm_sup(u.derivs)


def norm_l1(u: GridFunction) -> float:
    """Integral of |u| over [0, T]."""
    return integrate(u.grid, np.abs(u.values))


def min_max(u: GridFunction) -> tuple[float, float]:
    return float(u.values.min()), float(u.values.max())


def pos_neg_parts(u: GridFunction) -> tuple[np.ndarray, np.ndarray]:
    """Node-wise positive and negative parts of the values: u = u+ - u-."""
    plus = np.maximum(u.values, 0.0)
    minus = np.maximum(-u.values, 0.0)
    return plus, minus
