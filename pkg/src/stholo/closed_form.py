"""Closed-form meromorphic solution for the pressure law ``p = 1/v``.

With ``a = z + C`` and ``w = exp(-2i a)``::

    v = (w - 1) / (w + 1)        (= -i tan a)
    u = i v + C2
    v_z = -4i w / (w + 1)**2     (= -i (1 - v**2))

Zeros of ``v`` sit at ``a = pi k`` and simple poles at ``a = pi/2 + pi k``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .core import DEFAULT_TOL, PointStatus, SolutionParams, Tolerances, pole_status

NAN = complex(math.nan, math.nan)
HALF_PI = 0.5 * math.pi


class LatticeKind(str, enum.Enum):
    ZERO = "zero"
    POLE = "pole"


@dataclass(frozen=True)
class LatticePoint:
    location: complex
    index: int
    kind: LatticeKind


@dataclass(frozen=True)
class Window:
    """Rectangle ``(re_min, re_max) x [im_min, im_max]`` in the z-plane.

    Real bounds are strict, imaginary bounds inclusive (so a degenerate-looking
    strip hugging the lattice line still catches it).
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("window bounds must be finite")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("window must have positive extent")

    def contains(self, z: complex) -> bool:
        return self.re_min < z.real < self.re_max and self.im_min <= z.imag <= self.im_max


def pole_distance(z: complex, params: SolutionParams) -> float:
    """Distance from ``z`` to the nearest point of the pole lattice."""
    s = z + params.C - HALF_PI
    k = round(s.real / math.pi)
    return abs(s - k * math.pi)


def _small_exp(a: complex) -> complex:
    """``exp(-2i a)`` or its reciprocal, whichever has modulus <= 1.

    The formula for ``v_z`` is symmetric under ``w -> 1/w``; the quotient
    for ``v`` changes sign, which callers undo.
    """
    if a.imag >= 0:
        return cmath.exp(2j * a)
    return cmath.exp(-2j * a)


def _status(z: complex, v: complex, params: SolutionParams, tol: Tolerances) -> PointStatus:
    status = pole_status(pole_distance(z, params), tol)
    if status is PointStatus.REGULAR and abs(v) < tol.volume_guard:
        return PointStatus.NEAR_VOLUME_ZERO
    return status


def _raw_v(z: complex, params: SolutionParams) -> complex:
    a = z + params.C
    w = _small_exp(a)
    v = (w - 1) / (w + 1)
    # reciprocal branch flips the sign of the quotient
    return -v if a.imag >= 0 else v


def eval_v(z: complex, params: SolutionParams, tol: Tolerances = DEFAULT_TOL) -> Tuple[complex, PointStatus]:
    """Specific volume at ``z``. Poles return ``nan`` with status ``POLE``."""
    z = complex(z)
    if pole_distance(z, params) < tol.pole_tol:
        return NAN, PointStatus.POLE
    v = _raw_v(z, params)
    return v, _status(z, v, params, tol)


def eval_u(z: complex, params: SolutionParams, tol: Tolerances = DEFAULT_TOL) -> Tuple[complex, PointStatus]:
    v, status = eval_v(z, params, tol)
    return 1j * v + params.C2, status


def eval_v_prime(z: complex, params: SolutionParams, tol: Tolerances = DEFAULT_TOL) -> Tuple[complex, PointStatus]:
    z = complex(z)
    if pole_distance(z, params) < tol.pole_tol:
        return NAN, PointStatus.POLE
    w = _small_exp(z + params.C)
    dv = -4j * w / ((w + 1) * (w + 1))
    return dv, _status(z, _raw_v(z, params), params, tol)


def enumerate_lattice(params: SolutionParams, window: Window) -> List[LatticePoint]:
    """All zeros ``pi k - C`` and poles ``pi/2 + pi k - C`` inside ``window``, sorted by real part."""
    C = params.C
    if not window.im_min <= -C.imag <= window.im_max:
        return []
    points = []
    for kind, offset in ((LatticeKind.ZERO, 0.0), (LatticeKind.POLE, HALF_PI)):
        # analytic k-range, widened by one on each side and filtered on the computed location
        k_lo = math.floor((window.re_min + C.real - offset) / math.pi) - 1
        k_hi = math.ceil((window.re_max + C.real - offset) / math.pi) + 1
        for k in range(k_lo, k_hi + 1):
            loc = offset + k * math.pi - C
            if window.contains(loc):
                points.append(LatticePoint(loc, k, kind))
    points.sort(key=lambda p: (p.location.real, p.kind is LatticeKind.POLE))
    return points


def residue_at_pole(pole: LatticePoint, params: SolutionParams, radius: float = 0.1,
                    nodes: int = 256, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Residue of ``v`` from the trapezoidal rule on a circle around ``pole``.

    The rule is spectrally accurate for periodic integrands, so a few
    hundred nodes reach rounding level when the circle stays well inside
    the lattice spacing.
    """
    if pole.kind is not LatticeKind.POLE:
        raise ValueError("residue requested at a zero of v")
    if nodes < 256:
        raise ValueError("need at least 256 quadrature nodes")
    # nearest other lattice point (zero) is pi/2 away
    if not 0 < radius < HALF_PI - tol.guard:
        raise ValueError(f"contour radius {radius} passes within guard of another lattice point")
    total = 0j
    for j in range(nodes):
        e = cmath.exp(2j * math.pi * j / nodes)
        total += _raw_v(pole.location + radius * e, params) * e
    return total * radius / nodes


def initial_data(x_values: Iterable[float], params: SolutionParams,
                 tol: Tolerances = DEFAULT_TOL) -> List[Tuple[float, complex, complex, PointStatus]]:
    """Cauchy data ``(x, v0, u0, status)`` on the line ``t = 0``."""
    out = []
    for x in x_values:
        x = float(x)
        if not math.isfinite(x):
            raise ValueError("x values must be finite")
        v, status = eval_v(complex(x, 0.0), params, tol)
        out.append((x, v, 1j * v + params.C2, status))
    return out
