"""Shared value types, tolerances and regime classification.

Complex quantities are plain Python ``complex`` values throughout. The
merged variable is ``z = x + i*t``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    """Distances (absolute, in the z-plane or in |v|) used for point classification."""

    pole_tol: float = 1e-12
    guard: float = 1e-3
    volume_guard: float = 1e-3

    def __post_init__(self):
        if not 0 < self.pole_tol <= self.guard:
            raise ValueError("need 0 < pole_tol <= guard")
        if self.volume_guard < 0:
            raise ValueError("volume_guard must be non-negative")


DEFAULT_TOL = Tolerances()


def _check_finite(name: str, value: complex) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def as_complex(value) -> complex:
    """Coerce ``value`` to a finite complex number; accepts ``(re, im)`` pairs."""
    if isinstance(value, (tuple, list)):
        re, im = value
        value = complex(float(re), float(im))
    return _check_finite("value", value)


@dataclass(frozen=True)
class SolutionParams:
    """Shift constant ``C`` and velocity offset ``C2`` of the solution family."""

    C: complex = 0j
    C2: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "C", _check_finite("C", self.C))
        object.__setattr__(self, "C2", _check_finite("C2", self.C2))


class RegimeTag(str, enum.Enum):
    INTERIOR_HOLOMORPHIC = "InteriorHolomorphic"
    BOUNDARY_MEROMORPHIC = "BoundaryMeromorphic"
    FINITE_TIME_BLOWUP = "FiniteTimeBlowup"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    first_blowup_time: Optional[float] = None


def classify_regime(params: SolutionParams) -> Regime:
    """Classify the solution in the half-plane t >= 0 by the sign of Im(C).

    The boundary case is decided on the exact stored value, with no
    epsilon band. Perturb ``C`` yourself if you need a robust answer near
    ``Im(C) = 0``.
    """
    im = params.C.imag
    if im > 0:
        return Regime(RegimeTag.INTERIOR_HOLOMORPHIC)
    if im < 0:
        return Regime(RegimeTag.FINITE_TIME_BLOWUP, first_blowup_time=-im)
    return Regime(RegimeTag.BOUNDARY_MEROMORPHIC)


class PointStatus(str, enum.Enum):
    REGULAR = "regular"
    NEAR_POLE = "near_pole"
    POLE = "pole"
    NEAR_VOLUME_ZERO = "near_volume_zero"

    @property
    def is_singular(self) -> bool:
        return self in (PointStatus.POLE, PointStatus.NEAR_POLE)


def pole_status(distance: float, tol: Tolerances = DEFAULT_TOL) -> PointStatus:
    """Status from the distance to the nearest pole (volume zeros not considered)."""
    if distance < tol.pole_tol:
        return PointStatus.POLE
    if distance < tol.guard:
        return PointStatus.NEAR_POLE
    return PointStatus.REGULAR


class SingularPressure(ValueError):
    """Argument lies inside the guarded singular set of a pressure law."""


@dataclass(frozen=True)
class PressureLaw:
    """Holomorphic pressure law ``p(v)`` with its complex derivative.

    ``singularities`` lists the points where ``p`` is not holomorphic;
    arguments closer than ``guard`` to any of them are rejected.
    """

    p: Callable[[complex], complex]
    dp: Callable[[complex], complex]
    name: str
    singularities: tuple = field(default=())
    guard: float = DEFAULT_TOL.guard

    def distance_to_singular(self, v: complex) -> float:
        return min((abs(v - s) for s in self.singularities), default=math.inf)

    def is_singular(self, v: complex) -> bool:
        return self.distance_to_singular(v) < self.guard

    def check(self, v: complex) -> None:
        if self.is_singular(v):
            raise SingularPressure(f"{self.name}: v={v!r} within {self.guard:g} of a singularity")


def inv_v() -> PressureLaw:
    """The built-in law ``p = 1/v``."""
    return PressureLaw(p=lambda v: 1 / v, dp=lambda v: -1 / (v * v), name="inv_v", singularities=(0j,))


def first_failing_probe(law: PressureLaw, probes: Iterable[complex], rel: float = 1e-6) -> Optional[complex]:
    """Return the first probe where ``law.dp`` disagrees with a central difference of ``law.p``."""
    for v in probes:
        v = as_complex(v)
        law.check(v)
        # step balances O(h^2) truncation against rounding of p
        h = min(1e-5 * max(1.0, abs(v)), 1e-2 * law.distance_to_singular(v))
        fd = (law.p(v + h) - law.p(v - h)) / (2 * h)
        d = law.dp(v)
        if not abs(d - fd) <= rel * (1 + abs(d)):
            return v
    return None


def validate_pressure_law(law: PressureLaw, probes: Sequence[complex]) -> bool:
    """True iff the supplied derivative matches finite differences at every probe.

    Raises :class:`SingularPressure` when a probe is inside the guarded
    singular set.
    """
    bad = first_failing_probe(law, probes)
    if bad is not None:
        logger.warning("pressure law %s: derivative mismatch at v=%r", law.name, bad)
        return False
    return True
