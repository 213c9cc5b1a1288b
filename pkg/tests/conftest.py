import pytest
import sympy

from dtangent.base import Poly, example_arrangement
from dtangent.ore import OreAlgebra

SX, SY = sympy.symbols("x y")


@pytest.fixture(scope="session")
def arr3():
    return example_arrangement(3)


@pytest.fixture(scope="session")
def arr4():
    return example_arrangement(4)


@pytest.fixture(scope="session")
def A3(arr3):
    return OreAlgebra(arr3)


@pytest.fixture(scope="session")
def A4(arr4):
    return OreAlgebra(arr4)


def to_sympy(p: Poly):
    return sum((sympy.Rational(int(c.numerator), int(c.denominator)) * SX ** i * SY ** j
                for (i, j), c in p.terms.items()), sympy.Integer(0))


def from_sympy(expr) -> Poly:
    from gmpy2 import mpq

    P = sympy.Poly(sympy.expand(expr), SX, SY)
    return Poly({m: mpq(int(sympy.Rational(c).p), int(sympy.Rational(c).q))
                 for m, c in P.terms()})


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or \
        __import__("sys").modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines, key=lambda k: int(k[2:])):
            terminalreporter.write_line(lines[key])
