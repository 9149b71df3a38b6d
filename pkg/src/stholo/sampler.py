"""Sampling the closed-form solution on real (t, x) grids and slices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .closed_form import eval_v
from .core import DEFAULT_TOL, PointStatus, SolutionParams, Tolerances


@dataclass(frozen=True)
class GridSpec:
    t_min: float
    t_max: float
    nt: int
    x_min: float
    x_max: float
    nx: int

    def __post_init__(self):
        for name in ("t_min", "t_max", "x_min", "x_max"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.t_min > self.t_max or self.x_min > self.x_max:
            raise ValueError("grid bounds must satisfy min <= max")
        if self.nt < 1 or self.nx < 1:
            raise ValueError("nt and nx must be positive")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``tmin:tmax:nt,xmin:xmax:nx``."""
        try:
            t_part, x_part = text.split(",")
            t0, t1, nt = t_part.split(":")
            x0, x1, nx = x_part.split(":")
            return cls(float(t0), float(t1), int(nt), float(x0), float(x1), int(nx))
        except ValueError as exc:
            raise ValueError(f"bad grid spec {text!r}: {exc}") from None

    def t_values(self) -> List[float]:
        return [float(t) for t in np.linspace(self.t_min, self.t_max, self.nt)]

    def x_values(self) -> List[float]:
        return [float(x) for x in np.linspace(self.x_min, self.x_max, self.nx)]

    def nodes(self) -> Iterator[Tuple[float, float]]:
        xs = self.x_values()
        for t in self.t_values():
            for x in xs:
                yield t, x

    def as_dict(self) -> dict:
        return {"t_min": self.t_min, "t_max": self.t_max, "nt": self.nt,
                "x_min": self.x_min, "x_max": self.x_max, "nx": self.nx}


@dataclass(frozen=True)
class FieldSample:
    t: float
    x: float
    v: Optional[complex]
    u: Optional[complex]
    status: PointStatus


def sample_point(params: SolutionParams, t: float, x: float, tol: Tolerances = DEFAULT_TOL) -> FieldSample:
    """Closed-form ``v``, ``u`` at ``z = x + i t``; poles carry no values."""
    t, x = float(t), float(x)
    v, status = eval_v(complex(x, t), params, tol)
    if status is PointStatus.POLE:
        return FieldSample(t, x, None, None, status)
    return FieldSample(t, x, v, 1j * v + params.C2, status)


def sample_grid(params: SolutionParams, grid: GridSpec, tol: Tolerances = DEFAULT_TOL) -> List[FieldSample]:
    return [sample_point(params, t, x, tol) for t, x in grid.nodes()]


def _finite(values: Sequence[float], name: str) -> List[float]:
    out = [float(a) for a in values]
    if not all(math.isfinite(a) for a in out):
        raise ValueError(f"{name} must be finite")
    return out


def time_slice(params: SolutionParams, x: float, t_values: Sequence[float],
               tol: Tolerances = DEFAULT_TOL) -> List[FieldSample]:
    """Samples along the vertical line ``z = x + i t`` (fixed x, varying t)."""
    return [sample_point(params, t, x, tol) for t in _finite(t_values, "t values")]


def space_slice(params: SolutionParams, t: float, x_values: Sequence[float],
                tol: Tolerances = DEFAULT_TOL) -> List[FieldSample]:
    """Samples along the horizontal line ``z = x + i t`` (fixed t, varying x)."""
    return [sample_point(params, t, x, tol) for x in _finite(x_values, "x values")]
