import pytest
import sympy

from koszulkit.rings import QQ, ZZ, parse_ring


def to_sympy(p, symbols):
    """Independent conversion of a polynomial into a sympy expression."""
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(symbols, exps):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


@pytest.fixture
def Rxy():
    return parse_ring("QQ[x,y]")


@pytest.fixture
def Rxyz():
    return parse_ring("QQ[x,y,z]")
