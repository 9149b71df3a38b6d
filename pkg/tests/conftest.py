import mpmath
import pytest

from stholo.core import SolutionParams

mpmath.mp.dps = 40


def mp_v(z, C):
    """High-precision v from the unreduced exponential quotient."""
    w = mpmath.exp(-2j * (mpmath.mpc(z) + mpmath.mpc(C)))
    return complex((w - 1) / (w + 1))


def mp_v_prime(z, C):
    return complex(mpmath.diff(lambda s: (mpmath.exp(-2j * (s + mpmath.mpc(C))) - 1)
                               / (mpmath.exp(-2j * (s + mpmath.mpc(C))) + 1), mpmath.mpc(z)))


@pytest.fixture
def params_up():
    return SolutionParams(1j, 0j)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """``criterion(n, label, ok, detail)``: record and print one PASS/FAIL line, then assert."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def check(n, label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {label} ({detail})"
        lines.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
