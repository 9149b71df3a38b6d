"""Finite-difference residuals of the real (t, x) system.

Checks, by central differences on point evaluations only::

    v_t - u_x = 0                          (mass)
    u_t + p(v)_x = (u_x / v)_x             (momentum)
    f_t = i f_x                            (Cauchy-Riemann, z = x + i t)

A field is any callable ``(t, x)`` returning either a complex value or a
``(value, PointStatus)`` pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

from .closed_form import eval_u, eval_v
from .core import DEFAULT_TOL, PointStatus, PressureLaw, SolutionParams, Tolerances
from .sampler import GridSpec

Field = Callable[[float, float], Union[complex, Tuple[complex, PointStatus]]]

DEFAULT_H = 1e-4
# displacement of the momentum stencil around a volume zero, in units of max(h, volume_guard)
SHIFT_FACTOR = 3.0


class StencilHitsPole(ArithmeticError):
    pass


def _probe(f: Field, t: float, x: float) -> complex:
    out = f(t, x)
    if isinstance(out, tuple):
        value, status = out
        if status.is_singular:
            raise StencilHitsPole(f"stencil point (t={t!r}, x={x!r}) is {status.value}")
    else:
        value = out
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise StencilHitsPole(f"non-finite value at (t={t!r}, x={x!r})")
    return value


def _dt(f, t, x, h):
    return (_probe(f, t + h, x) - _probe(f, t - h, x)) / (2 * h)


def _dx(f, t, x, h):
    return (_probe(f, t, x + h) - _probe(f, t, x - h)) / (2 * h)


def cr_residual(f: Field, t: float, x: float, h: float = DEFAULT_H) -> float:
    """``|f_t - i f_x|`` on the 5-point stencil."""
    return abs(_dt(f, t, x, h) - 1j * _dx(f, t, x, h))


def mass_residual(v_field: Field, u_field: Field, t: float, x: float, h: float = DEFAULT_H) -> float:
    return abs(_dt(v_field, t, x, h) - _dx(u_field, t, x, h))


def _momentum(v_field, u_field, law, t, x, h):
    u_t = _dt(u_field, t, x, h)
    v_m, v_p = _probe(v_field, t, x - h), _probe(v_field, t, x + h)
    p_x = (law.p(v_p) - law.p(v_m)) / (2 * h)
    u_0 = _probe(u_field, t, x)
    u_m2, u_p2 = _probe(u_field, t, x - 2 * h), _probe(u_field, t, x + 2 * h)
    # viscous flux u_x / v at x +- h, each u_x itself a central difference
    flux_p = (u_p2 - u_0) / (2 * h) / v_p
    flux_m = (u_0 - u_m2) / (2 * h) / v_m
    return abs(u_t + p_x - (flux_p - flux_m) / (2 * h))


def _min_volume(v_field, t, x, h):
    return min(abs(_probe(v_field, t, x + k * h)) for k in (-1, 0, 1))


def momentum_residual(v_field: Field, u_field: Field, law: PressureLaw, t: float, x: float,
                      h: float = DEFAULT_H, tol: Tolerances = DEFAULT_TOL) -> Tuple[float, PointStatus]:
    """Momentum residual and the status it was evaluated under.

    Around a zero of ``v`` the equation is formally singular but the
    solution is smooth, so instead of taking a limit the whole stencil is
    moved sideways in x by ``3*max(h, volume_guard)`` and evaluated there;
    the status is then ``NEAR_VOLUME_ZERO``.
    """
    if _min_volume(v_field, t, x, h) >= tol.volume_guard:
        return _momentum(v_field, u_field, law, t, x, h), PointStatus.REGULAR
    d = SHIFT_FACTOR * max(h, tol.volume_guard)
    for xs in (x + d, x - d):
        if _min_volume(v_field, t, xs, h) >= tol.volume_guard:
            return _momentum(v_field, u_field, law, t, xs, h), PointStatus.NEAR_VOLUME_ZERO
    return _momentum(v_field, u_field, law, t, x + d, h), PointStatus.NEAR_VOLUME_ZERO


@dataclass(frozen=True)
class ResidualReport:
    t: float
    x: float
    h: float
    r_cr: float
    r_mass: float
    r_momentum: float
    status: PointStatus


@dataclass
class VerificationSummary:
    max_r_cr: Optional[float] = None
    max_r_mass: Optional[float] = None
    max_r_momentum: Optional[float] = None
    n_nodes: int = 0
    n_pole: int = 0
    n_skipped: int = 0
    skipped: List[Tuple[float, float, str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "max_r_cr": self.max_r_cr,
            "max_r_mass": self.max_r_mass,
            "max_r_momentum": self.max_r_momentum,
            "n_nodes": self.n_nodes,
            "n_pole": self.n_pole,
            "n_skipped": self.n_skipped,
        }


def _node_status(v_field, t, x) -> PointStatus:
    out = v_field(t, x)
    return out[1] if isinstance(out, tuple) else PointStatus.REGULAR


def verify_fields(v_field: Field, u_field: Field, law: PressureLaw, grid: GridSpec,
                  h: float = DEFAULT_H, tol: Tolerances = DEFAULT_TOL
                  ) -> Tuple[List[ResidualReport], VerificationSummary]:
    """Residual reports at every grid node, in row-major (t, x) order.

    Pole and near-pole nodes, and nodes whose stencil touches one, are
    skipped and counted rather than reported. ``r_cr`` is the larger of the
    Cauchy-Riemann residuals of ``v`` and ``u``.
    """
    if not (math.isfinite(h) and h > 0):
        raise ValueError(f"step h must be positive and finite, got {h!r}")
    reports, summary = [], VerificationSummary()
    for t, x in grid.nodes():
        summary.n_nodes += 1
        status = _node_status(v_field, t, x)
        if status is PointStatus.POLE:
            summary.n_pole += 1
            summary.skipped.append((t, x, status.value))
            continue
        if status is PointStatus.NEAR_POLE:
            summary.n_skipped += 1
            summary.skipped.append((t, x, status.value))
            continue
        try:
            r_cr = max(cr_residual(v_field, t, x, h), cr_residual(u_field, t, x, h))
            r_mass = mass_residual(v_field, u_field, t, x, h)
            r_mom, mom_status = momentum_residual(v_field, u_field, law, t, x, h, tol)
        except StencilHitsPole:
            summary.n_skipped += 1
            summary.skipped.append((t, x, "stencil_hits_pole"))
            continue
        if mom_status is PointStatus.NEAR_VOLUME_ZERO:
            status = mom_status
        reports.append(ResidualReport(t, x, h, r_cr, r_mass, r_mom, status))

    if reports:
        summary.max_r_cr = max(r.r_cr for r in reports)
        summary.max_r_mass = max(r.r_mass for r in reports)
        summary.max_r_momentum = max(r.r_momentum for r in reports)
    return reports, summary


def closed_form_fields(params: SolutionParams, tol: Tolerances = DEFAULT_TOL) -> Tuple[Field, Field]:
    """``(v_field, u_field)`` for the closed-form solution, sampled at ``z = x + i t``."""
    def v_field(t, x):
        return eval_v(complex(x, t), params, tol)

    def u_field(t, x):
        return eval_u(complex(x, t), params, tol)

    return v_field, u_field


def verify_grid(params: SolutionParams, law: PressureLaw, grid: GridSpec, h: float = DEFAULT_H,
                tol: Tolerances = DEFAULT_TOL) -> Tuple[List[ResidualReport], VerificationSummary]:
    """Run :func:`verify_fields` on the closed-form solution selected by ``params``."""
    v_field, u_field = closed_form_fields(params, tol)
    return verify_fields(v_field, u_field, law, grid, h, tol)
