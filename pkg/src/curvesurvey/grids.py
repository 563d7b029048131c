"""Time grids, discretized functional populations and linear interpolation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Ordered measurement times t_1 < ... < t_D spanning [t_1, t_D]."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValidationError("grid needs at least 2 one-dimensional points")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("grid points must be finite")
        if not np.all(np.diff(pts) > 0):
            raise ValidationError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def t_min(self) -> float:
        return float(self.points[0])

    @property
    def t_max(self) -> float:
        return float(self.points[-1])


@dataclass(frozen=True, eq=False)
class FunctionalPopulation:
    """N discretized curves on a shared grid plus an N x p auxiliary matrix."""

    grid: TimeGrid
    values: np.ndarray  # (N, D)
    aux: np.ndarray  # (N, p)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        aux = np.asarray(self.aux, dtype=float)
        if values.ndim != 2 or values.shape[1] != self.grid.size:
            raise ValidationError(
                f"values must be (N, {self.grid.size}), got {values.shape}"
            )
        if aux.ndim != 2 or aux.shape[0] != values.shape[0]:
            raise ValidationError(
                f"aux must have {values.shape[0]} rows, got shape {aux.shape}"
            )
        if aux.shape[1] < 1:
            raise ValidationError("aux needs at least one column")
        if not np.all(np.isfinite(values)) or not np.all(np.isfinite(aux)):
            raise ValidationError("population entries must be finite")
        values.setflags(write=False)
        aux.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "aux", aux)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.aux.shape[1]

    def aux_totals(self) -> np.ndarray:
        """Population totals of the auxiliary variables (p,)."""
        return self.aux.sum(axis=0)


def interpolate(curve: np.ndarray, grid: TimeGrid, t):
    """Piecewise-linear value of a discretized curve at time(s) t.

    Exact at grid points; raises for t outside [t_1, t_D].
    """
    curve = np.asarray(curve, dtype=float)
    if curve.shape != (grid.size,):
        raise ValidationError(f"curve must have {grid.size} values")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < grid.t_min) or np.any(t_arr > grid.t_max):
        raise ValidationError(
            f"t outside the grid range [{grid.t_min}, {grid.t_max}]"
        )
    out = np.interp(t_arr, grid.points, curve)
    return float(out) if np.ndim(t) == 0 else out


def population_mean(pop: FunctionalPopulation) -> np.ndarray:
    """True mean curve of the finite population, one value per grid point."""
    return pop.values.mean(axis=0)
