import random

import pytest

from manypoints import poly as P
from manypoints.curve import CurveModel, InvalidModelError, curve, validate_genus2
from manypoints.field import field_for_order

EXAMPLE1 = "q=2; h=x; f=x^5+x^3+x^2+x"
EXAMPLE2 = "q=5; f=x^5-x^3+x"


def random_models(q: int, count: int, seed: int = 0) -> list[CurveModel]:
    """Uniformly drawn valid models (both parities of deg f, every shape at infinity)."""
    F = field_for_order(q)
    rng = random.Random(seed * 1000 + q)
    out = []
    while len(out) < count:
        f = P.trim(tuple(rng.randrange(q) for _ in range(7)))
        h = P.trim(tuple(rng.randrange(q) for _ in range(4))) if F.p == 2 else ()
        m = CurveModel(F, h, f)
        try:
            if validate_genus2(m):
                out.append(m)
        except InvalidModelError:
            pass
    return out


@pytest.fixture(scope="session")
def example1():
    return CurveModel.parse(EXAMPLE1)


@pytest.fixture(scope="session")
def example2():
    return CurveModel.parse(EXAMPLE2)


@pytest.fixture(scope="session")
def f16_curve():
    return curve(16, "a^6*x^5+a^12*x^4+x^3+a^3*x^2+a^9*x", "x^2+x")


# -- acceptance report ---------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion; echoed in the terminal summary."""

    def report(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
