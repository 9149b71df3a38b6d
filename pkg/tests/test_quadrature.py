import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from stholo.closed_form import eval_v
from stholo.core import SingularPressure, SolutionParams, inv_v
from stholo.pressure import rational_law
from stholo.quadrature import (DenominatorZero, IntegratedField, NonConvergent, OdeProblem, PoleEncounter,
                               SingularPressureEncounter, integrate_path, ode_rhs, quadrature_map,
                               velocity_from_volume)

LAW = inv_v()
P0 = SolutionParams(0j)


def closed(z, C=0j):
    return eval_v(z, SolutionParams(C))[0]


def run(path, C=0j, rel_tol=1e-10, abs_tol=1e-12, law=LAW):
    return integrate_path(OdeProblem(law, 0j, closed(path[0], C), tuple(path)), rel_tol, abs_tol)


def test_rhs_examples():
    assert ode_rhs(1, LAW) == 0
    assert abs(ode_rhs(-1j, LAW) - (-2j)) < 1e-15
    assert abs(ode_rhs(0.5, LAW) - (-0.75j)) < 1e-15


def test_rhs_rejects_singular_volume():
    with pytest.raises(SingularPressure):
        ode_rhs(1e-6, LAW)


def test_velocity_from_volume():
    assert velocity_from_volume(0, 0) == 0
    assert abs(velocity_from_volume(-1j, 0) - 1) < 1e-15
    assert abs(velocity_from_volume(1 - 1e-12, 2 + 1j) - (1j + 2 + 1j)) < 1e-11


def test_segment_above_real_axis_matches_closed_form():
    traj = run((-1 + 0.5j, 1 + 0.5j))
    assert abs(traj.v_end - closed(1 + 0.5j)) < 1e-8
    assert traj.nodes[0] == (-1 + 0.5j, closed(-1 + 0.5j))
    assert traj.nodes[-1][0] == 1 + 0.5j
    assert traj.accepted > 0 and traj.min_step > 0


@pytest.mark.parametrize("v_star", [1.0, -1.0])
def test_fixed_points_are_constant(v_star):
    traj = integrate_path(OdeProblem(LAW, 0j, v_star, (0, 3 + 1j, -2j)), 1e-10, 1e-12)
    assert all(v == v_star for _, v in traj.nodes)


def test_path_through_pole_raises_pole_encounter():
    # C = -i puts the pole lattice on Im z = 1; the polyline's corner sits on pi/2 + i
    C = -1j
    with pytest.raises(PoleEncounter) as info:
        run((0, math.pi / 2 + 1j, 2j), C=C)
    partial = info.value.trajectory
    assert abs(partial.z_end - (math.pi / 2 + 1j)) < 1e-5
    assert abs(partial.v_end) > 1e3


def test_near_miss_stays_finite():
    C = -1j
    traj = run((0, math.pi / 2 + 0.95j, 2j), C=C)
    assert abs(traj.v_end - closed(2j, C)) < 1e-8


def test_crossing_volume_zero_hits_singular_pressure():
    with pytest.raises(SingularPressureEncounter):
        run((-0.5 + 0j, 0.5 + 0j))


def test_tolerance_bounds_checked():
    prob = OdeProblem(LAW, 0j, 0.5, (0, 1))
    with pytest.raises(ValueError):
        integrate_path(prob, 1e-15, 1e-12)
    with pytest.raises(ValueError):
        integrate_path(prob, 1e-10, 0.1)
    with pytest.raises(SingularPressure):
        integrate_path(OdeProblem(LAW, 0j, 1e-9, (0, 1)), 1e-8, 1e-10)


def test_problem_validation():
    with pytest.raises(ValueError):
        OdeProblem(LAW, 0j, 1, (0,))
    with pytest.raises(ValueError):
        OdeProblem(LAW, 0j, 1, (0, 1, 1))


waypoint = st.builds(complex, st.floats(-2, 2), st.floats(0.2, 3))


@settings(max_examples=40, deadline=None)
@given(st.lists(waypoint, min_size=2, max_size=5, unique=True))
def test_oracle_equivalence(path):
    traj = run(path)
    assert abs(traj.v_end - closed(path[-1])) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(waypoint, waypoint, waypoint)
def test_path_independence(a, b, mid):
    assume(a != b and mid not in (a, b))
    # the strip 0.2 <= Im z <= 3 is pole-free and convex, so any two polylines in it are homotopic
    direct = run((a, b)).v_end
    detour = run((a, mid, b)).v_end
    assert abs(direct - detour) <= 1e-9


def test_tolerance_scaling():
    path = (-2 + 0.3j, 1.5 + 2j, 0.5 + 0.25j)
    target = closed(path[-1])
    errors = [abs(run(path, rel_tol=tol, abs_tol=1e-14).v_end - target) for tol in 10.0 ** -np.arange(4, 11)]
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= 2 * coarse + 1e-13


def test_general_law_runs():
    # p = 1/v^2 has no closed form here; check against a much tighter run of the same problem
    law = rational_law("1/v^2")
    prob = OdeProblem(law, 0.1j, 0.8 + 0.1j, (0, 0.5 + 0.5j, 1j))
    loose = integrate_path(prob, 1e-8, 1e-10).v_end
    tight = integrate_path(prob, 1e-13, 1e-14).v_end
    assert abs(loose - tight) < 1e-7


# quadrature map

@pytest.mark.parametrize("v", np.linspace(-0.9, 0.9, 19))
def test_quadrature_map_reproduces_log_antiderivative(v):
    C1 = 0.3 - 0.2j
    expected = 0.5j * (cmath.log(1 + v) - cmath.log(1 - v)) - C1
    assert abs(quadrature_map(v, LAW, C1, 0j, 0j) - expected) < 1e-10


def test_quadrature_map_complex_argument():
    v = 0.3 + 0.4j
    expected = 0.5j * (cmath.log(1 + v) - cmath.log(1 - v))
    assert abs(quadrature_map(v, LAW) - expected) < 1e-10


def test_quadrature_map_empty_integral():
    assert quadrature_map(0.4 + 0.1j, LAW, 2 - 1j, 0j, 0.4 + 0.1j) == -(2 - 1j)


def test_quadrature_map_detects_denominator_root():
    with pytest.raises(DenominatorZero):
        quadrature_map(1.5, LAW)
    with pytest.raises(DenominatorZero):
        quadrature_map(-0.5 + 1e-9j, LAW, ref_point=-1.5 - 1e-9j)


def test_quadrature_map_endpoint_on_root_fails_cleanly():
    with pytest.raises((NonConvergent, DenominatorZero)):
        quadrature_map(-1.0, LAW, ref_point=-1.5)


@pytest.mark.parametrize("z1, z2", [(0.1 + 0.5j, 0.4 + 0.9j), (-0.3 + 0.3j, 0.2 + 1.0j), (0.5 + 2j, -0.5 + 1.5j)])
def test_round_trip_with_integrator(z1, z2):
    traj = run((z1, z2))
    v1, v2 = closed(z1), traj.v_end
    dz = quadrature_map(v2, LAW) - quadrature_map(v1, LAW)
    assert abs(dz - (z2 - z1)) < 1e-7


# integrated field

def test_integrated_field_matches_closed_form():
    p = SolutionParams(1j)
    field = IntegratedField(LAW, 1j, eval_v(1j, p)[0])
    for t, x in [(1.0, 0.0), (0.5, -3.0), (2.0, 3.0), (0.5001, -3.0)]:
        v, status = field(t, x)
        assert abs(v - eval_v(complex(x, t), p)[0]) < 1e-9
    u = field.velocity(0.5)
    assert u(2.0, 3.0)[0] == 1j * field(2.0, 3.0)[0] + 0.5


def test_integrated_field_reports_pole():
    p = SolutionParams(-1j)
    field = IntegratedField(LAW, 0j, eval_v(0j, p)[0])
    v, status = field(1.0, math.pi / 2)
    assert status.value == "pole"
