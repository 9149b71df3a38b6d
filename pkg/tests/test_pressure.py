import cmath

import pytest
from hypothesis import given, strategies as st

from stholo.core import validate_pressure_law
from stholo.pressure import PressureSpecError, parse_rational, rational_law, resolve_law

points = st.builds(complex, st.floats(0.3, 3), st.floats(-2, 2))

CASES = {
    "1/v": lambda v: 1 / v,
    "1 / v^2": lambda v: 1 / v**2,
    "v^-3": lambda v: v**-3,
    "(1 + v^2) / (2*v^3)": lambda v: (1 + v**2) / (2 * v**3),
    "-v + 3.5e-1*v**2": lambda v: -v + 0.35 * v**2,
    "2/(v*(v+1)) - -1": lambda v: 2 / (v * (v + 1)) + 1,
    "((v))^2 - .5": lambda v: v * v - 0.5,
}


@pytest.mark.parametrize("text", sorted(CASES))
@given(v=points)
def test_parsed_law_matches_python(text, v):
    law = rational_law(text)
    assert cmath.isclose(law.p(v), CASES[text](v), rel_tol=1e-12)


@pytest.mark.parametrize("text", sorted(CASES))
def test_parsed_derivative_validates(text):
    assert validate_pressure_law(rational_law(text), [0.7, 1.3 + 0.4j, 2 - 1j])


def test_singular_set_is_denominator_roots():
    law = rational_law("1/((v-2)*(v+1))")
    assert sorted(s.real for s in law.singularities) == pytest.approx([-1, 2])
    assert law.is_singular(2.0001) and not law.is_singular(1.5)
    assert rational_law("v^2 + 1").singularities == ()


@pytest.mark.parametrize("bad", ["", "1/", "v^1.5", "v^v", "(1+v", "1/v)", "2x", "1/(v-v)"])
def test_rejects_malformed(bad):
    with pytest.raises(PressureSpecError):
        rational_law(bad)


def test_precedence_and_associativity():
    r = parse_rational("8/2/2 - 1 - 1")
    assert r.num(0) / r.den(0) == pytest.approx(0.0)
    r = parse_rational("-v^2")
    assert r.num(3.0) / r.den(3.0) == pytest.approx(-9.0)


def test_resolve_builtin():
    law = resolve_law("inv_v")
    assert law.name == "inv_v" and law.p(2) == 0.5
    assert resolve_law("1/v").p(4) == pytest.approx(0.25)
