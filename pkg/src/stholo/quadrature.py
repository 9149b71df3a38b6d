"""Solve the reduced complex ODE for a general pressure law.

Eliminating ``u`` and integrating once gives the first-order equation::

    v_z = -i v (p(v) - v - C_int)

which :func:`integrate_path` continues along a polyline in the z-plane
with an embedded Dormand-Prince 5(4) pair. :func:`quadrature_map` goes the
other way, recovering ``z`` from ``v`` as a contour integral in the v-plane.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from scipy import integrate

from .core import DEFAULT_TOL, PointStatus, PressureLaw, SingularPressure, Tolerances

MIN_STEP = 1e-13
SAFETY = 0.9
MAX_GROWTH = 5.0
MIN_SHRINK = 0.2
# PI controller exponents for an order-5 error estimate
ALPHA = 0.7 / 5
BETA = 0.4 / 5

# Dormand-Prince 5(4) tableau, FSAL
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40


def ode_rhs(v: complex, law: PressureLaw, C_int: complex = 0j) -> complex:
    """Right-hand side ``-i v (p(v) - v - C_int)``; raises inside the law's guarded singular set."""
    law.check(v)
    return -1j * v * (law.p(v) - v - C_int)


def velocity_from_volume(v: complex, C2: complex = 0j) -> complex:
    return 1j * v + C2


@dataclass(frozen=True)
class OdeProblem:
    law: PressureLaw
    C_int: complex
    v_start: complex
    path: Tuple[complex, ...]

    def __post_init__(self):
        path = tuple(complex(z) for z in self.path)
        if len(path) < 2:
            raise ValueError("path needs at least two waypoints")
        if any(a == b for a, b in zip(path, path[1:])):
            raise ValueError("consecutive waypoints must be distinct")
        object.__setattr__(self, "path", path)
        object.__setattr__(self, "v_start", complex(self.v_start))
        object.__setattr__(self, "C_int", complex(self.C_int))


@dataclass
class Trajectory:
    nodes: List[Tuple[complex, complex]] = field(default_factory=list)
    accepted: int = 0
    rejected: int = 0
    min_step: float = math.inf

    @property
    def z_end(self) -> complex:
        return self.nodes[-1][0]

    @property
    def v_end(self) -> complex:
        return self.nodes[-1][1]


class IntegrationError(RuntimeError):
    """Integration stopped early; ``trajectory`` holds the nodes reached so far."""

    def __init__(self, message: str, trajectory: Trajectory):
        super().__init__(message)
        self.trajectory = trajectory


class PoleEncounter(IntegrationError):
    pass


class StepUnderflow(IntegrationError):
    pass


class SingularPressureEncounter(IntegrationError):
    pass


def _initial_step(f, v, f0, length, abs_tol, rel_tol):
    sc = abs_tol + rel_tol * abs(v)
    d0, d1 = abs(v) / sc, abs(f0) / sc
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, length)
    f1 = f(v + h0 * f0)
    d2 = abs(f1 - f0) / sc / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, length)


def integrate_path(problem: OdeProblem, rel_tol: float = 1e-10, abs_tol: float = 1e-12,
                   tol: Tolerances = DEFAULT_TOL) -> Trajectory:
    """Continue ``v`` along the straight segments of ``problem.path``.

    Each segment is parameterised by arclength. Steps are accepted when the
    embedded error estimate is below ``abs_tol + rel_tol*|v|``.

    Raises :class:`PoleEncounter` once ``|v|`` exceeds ``1/tol.pole_tol`` (or
    the step collapses while ``|v|`` is already beyond ``1/tol.guard``),
    :class:`StepUnderflow` when the step drops below 1e-13 otherwise, and
    :class:`SingularPressureEncounter` when ``v`` enters the law's guarded
    singular set. Each carries the partial trajectory.
    """
    for name, val in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not 1e-14 <= val <= 1e-2:
            raise ValueError(f"{name} must lie in [1e-14, 1e-2]")
    law, C_int = problem.law, problem.C_int
    if law.is_singular(problem.v_start):
        raise SingularPressure(f"v_start={problem.v_start!r} is in the singular set of {law.name}")

    p = law.p
    blowup = 1.0 / tol.pole_tol
    traj = Trajectory(nodes=[(problem.path[0], problem.v_start)])
    v = problem.v_start
    h = None
    err_old = 1.0

    for z0, z1 in zip(problem.path, problem.path[1:]):
        length = abs(z1 - z0)
        direction = (z1 - z0) / length

        def f(y, _d=direction):
            if law.is_singular(y):
                raise SingularPressure(y)
            return -1j * _d * y * (p(y) - y - C_int)

        try:
            k1 = f(v)
        except SingularPressure:
            raise SingularPressureEncounter(f"v={v!r} entered the singular set", traj) from None
        if h is None:
            h = _initial_step(f, v, k1, length, abs_tol, rel_tol)
        s = 0.0
        while s < length:
            last = h >= length - s
            h_full = h
            if last:
                h = length - s
            stage_singular = False
            try:
                k2 = f(v + h * A21 * k1)
                k3 = f(v + h * (A31 * k1 + A32 * k2))
                k4 = f(v + h * (A41 * k1 + A42 * k2 + A43 * k3))
                k5 = f(v + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
                k6 = f(v + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
                v_new = v + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
                k7 = f(v_new)
                err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
                # error per unit step (for h < 1): tighter than the per-step bound, which keeps
                # accumulated global error near the requested tolerance on long paths
                err = abs(err_vec) / ((abs_tol + rel_tol * max(abs(v), abs(v_new))) * min(1.0, h))
            except (SingularPressure, ZeroDivisionError, OverflowError):
                # a stage stepped into the singular set: shrink and retry, unless v itself is there
                if law.is_singular(v):
                    raise SingularPressureEncounter(f"v={v!r} entered the singular set", traj) from None
                stage_singular = True
                err = math.inf
            if not math.isfinite(err):
                err = math.inf

            if err <= 1.0:
                s = length if last else s + h
                v = v_new
                k1 = k7
                traj.accepted += 1
                traj.min_step = min(traj.min_step, h)
                traj.nodes.append((z1 if last else z0 + s * direction, v))
                if abs(v) > blowup:
                    raise PoleEncounter(f"|v| exceeded {blowup:g} near z={traj.z_end!r}", traj)
                if law.is_singular(v):
                    raise SingularPressureEncounter(f"v={v!r} entered the singular set", traj)
                err = max(err, 1e-10)
                fac = SAFETY * err ** -ALPHA * err_old ** BETA
                h *= min(MAX_GROWTH, max(MIN_SHRINK, fac))
                if last:
                    # a segment-end truncation says nothing about the next segment
                    h = max(h, h_full)
                err_old = err
            else:
                traj.rejected += 1
                fac = MIN_SHRINK if math.isinf(err) else max(MIN_SHRINK, SAFETY * err ** -0.2)
                h *= fac
            if h < MIN_STEP and s < length:
                # a collapsing step with |v| already large is the signature of a movable pole
                if stage_singular:
                    cls = SingularPressureEncounter
                elif abs(v) > 1.0 / tol.guard:
                    cls = PoleEncounter
                else:
                    cls = StepUnderflow
                raise cls(f"step fell below {MIN_STEP:g} at z={z0 + s * direction!r}", traj)
    return traj


def dp5_step(law: PressureLaw, C_int: complex, z0: complex, v0: complex, z1: complex) -> complex:
    """One fixed Dormand-Prince step from ``z0`` to ``z1`` (no error control).

    The result is a smooth function of ``z1``, which keeps finite-difference
    stencils built from it free of step-selection noise.
    """
    h = z1 - z0
    p = law.p

    def f(y):
        return -1j * y * (p(y) - y - C_int)

    k1 = f(v0)
    k2 = f(v0 + h * A21 * k1)
    k3 = f(v0 + h * (A31 * k1 + A32 * k2))
    k4 = f(v0 + h * (A41 * k1 + A42 * k2 + A43 * k3))
    k5 = f(v0 + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
    k6 = f(v0 + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
    return v0 + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)


class DenominatorZero(ArithmeticError):
    pass


class NonConvergent(ArithmeticError):
    pass


def quadrature_map(v: complex, law: PressureLaw, C1: complex = 0j, C_int: complex = 0j,
                   ref_point: complex = 0j, samples: int = 64,
                   epsabs: float = 1e-13, epsrel: float = 1e-12) -> complex:
    """``z = -C1 + i * integral_{ref_point}^{v} dw / (-w^2 + w p(w) + C_int w)``.

    The integral runs along the straight segment from ``ref_point`` to ``v``
    with adaptive Gauss-Kronrod quadrature. Endpoints are never evaluated,
    so ``ref_point`` may sit on a removable point of the integrand (for
    ``p = 1/v`` the anchor ``ref_point = 0`` reproduces the closed form).
    """
    v, ref_point = complex(v), complex(ref_point)
    if v == ref_point:
        return -complex(C1)
    if samples < 64:
        raise ValueError("need at least 64 sample points")
    delta = v - ref_point

    def denom(w):
        return -w * w + w * law.p(w) + C_int * w

    # dense sampling of the denominator: a root on or near the segment shows up
    # as a tiny modulus or as a phase jump between neighbouring samples
    prev = None
    for k in range(samples):
        w = ref_point + (k + 0.5) / samples * delta
        d = denom(w)
        if not (math.isfinite(d.real) and math.isfinite(d.imag)) or abs(d) < 1e-12 * (1 + abs(w) ** 2):
            raise DenominatorZero(f"denominator vanishes near w={w!r}")
        if prev is not None:
            jump = abs(math.remainder(math.atan2(d.imag, d.real) - math.atan2(prev.imag, prev.real), 2 * math.pi))
            if jump > 0.5 * math.pi:
                raise DenominatorZero(f"segment passes close to a root of the denominator near w={w!r}")
        prev = d

    def integrand(s):
        return 1.0 / denom(ref_point + s * delta)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(integrand, 0.0, 1.0, complex_func=True,
                                    epsabs=epsabs, epsrel=epsrel, limit=200)
        except integrate.IntegrationWarning as exc:
            raise NonConvergent(str(exc)) from None
        except ZeroDivisionError:
            raise DenominatorZero("denominator vanishes at a quadrature node") from None
    return -complex(C1) + 1j * delta * val


class IntegratedField:
    """Point evaluator ``(t, x) -> (v, status)`` backed by :func:`integrate_path`.

    Results are chained: a query is integrated from the nearest previously
    integrated point (or from the anchor), and queries within
    ``local_radius`` of such a point take a single fixed DP5 step from it.
    The fixed step makes nearby values a smooth function of position, so
    finite-difference stencils see a locally exact solution of the ODE.
    Paths are straight, so the field is only valid where the straight
    segments it uses avoid poles.
    """

    def __init__(self, law: PressureLaw, z_anchor: complex, v_anchor: complex, C_int: complex = 0j,
                 rel_tol: float = 1e-12, abs_tol: float = 1e-14, local_radius: float = 1e-3,
                 cell: float = 0.1, tol: Tolerances = DEFAULT_TOL):
        self.law = law
        self.C_int = complex(C_int)
        self.rel_tol, self.abs_tol = rel_tol, abs_tol
        self.local_radius = local_radius
        self.cell = cell
        self.tol = tol
        self._cells: dict = {}
        self._store(complex(z_anchor), complex(v_anchor))
        self._anchor = (complex(z_anchor), complex(v_anchor))

    def _key(self, z):
        return (math.floor(z.real / self.cell), math.floor(z.imag / self.cell))

    def _store(self, z, v):
        self._cells.setdefault(self._key(z), []).append((z, v))

    def _nearest(self, z) -> Optional[Tuple[complex, complex]]:
        kx, ky = self._key(z)
        best, best_d = None, math.inf
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for zc, vc in self._cells.get((kx + dx, ky + dy), ()):
                    d = abs(z - zc)
                    if d < best_d:
                        best, best_d = (zc, vc), d
        return best

    def value(self, z: complex) -> complex:
        z = complex(z)
        near = self._nearest(z)
        if near is not None and abs(z - near[0]) <= self.local_radius:
            if z == near[0]:
                return near[1]
            return dp5_step(self.law, self.C_int, near[0], near[1], z)
        start = near if near is not None else self._anchor
        problem = OdeProblem(self.law, self.C_int, start[1], (start[0], z))
        v = integrate_path(problem, self.rel_tol, self.abs_tol, self.tol).v_end
        self._store(z, v)
        return v

    def __call__(self, t: float, x: float) -> Tuple[complex, PointStatus]:
        try:
            v = self.value(complex(x, t))
        except PoleEncounter:
            return complex(math.nan, math.nan), PointStatus.POLE
        except IntegrationError:
            return complex(math.nan, math.nan), PointStatus.NEAR_POLE
        status = PointStatus.NEAR_VOLUME_ZERO if abs(v) < self.tol.volume_guard else PointStatus.REGULAR
        return v, status

    def velocity(self, C2: complex = 0j) -> Callable[[float, float], Tuple[complex, PointStatus]]:
        """Matching velocity field ``u = i v + C2`` sharing this field's cache."""
        def u(t, x):
            v, status = self(t, x)
            return velocity_from_volume(v, C2), status
        return u
