"""Groebner bases, ideal operations and Smith normal form against sympy oracles."""

import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulkit import matrix as mx
from koszulkit.groebner import (
    Ideal,
    groebner_basis,
    ideal_membership,
    is_regular_sequence,
    normal_form,
    radical_membership,
)
from koszulkit.rings import QQ, ZZ, parse_ring
from koszulkit.snf import invariant_factors, module_type, smith_normal_form
from koszulkit.fpmodules import PresentedModule
from koszulkit.suite import dense_membership, determinantal_invariants, random_membership_pair

from conftest import to_sympy

X, Y, Z = sympy.symbols("x y z")


def P(R, s):
    return R.convert(s)


def _monic(e, syms):
    return sympy.expand(e / sympy.Poly(e, *syms).LC(order="grevlex"))


def test_single_generator(Rxy):
    assert groebner_basis([P(Rxy, "x")]) == [P(Rxy, "x")]


def test_unit_ideal(Rxy):
    assert groebner_basis([P(Rxy, "1")]) == [Rxy.one]


def test_buchberger_criterion(Rxy):
    G = groebner_basis([P(Rxy, "x^2"), P(Rxy, "x*y + y^2")])
    # every S-pair reduces to zero
    for g, h in itertools.combinations(G, 2):
        lg, lh = g.leading_monomial(), h.leading_monomial()
        lcm = tuple(max(a, b) for a, b in zip(lg, lh))
        mg = Rxy.monomial(tuple(a - b for a, b in zip(lcm, lg)), 1 / g.leading_coefficient())
        mh = Rxy.monomial(tuple(a - b for a, b in zip(lcm, lh)), 1 / h.leading_coefficient())
        assert not normal_form(mg * g - mh * h, G)
    for f in ("x^2", "x*y + y^2"):
        assert not normal_form(P(Rxy, f), G)


@pytest.mark.parametrize("gens", [
    ["x^2", "x*y + y^2"],
    ["x^2 - y", "x*y - z"],
    ["x*y - z^2", "y^3 - x", "x + y + z"],
    ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
])
def test_reduced_basis_matches_sympy(Rxyz, gens):
    syms = (X, Y, Z)
    ours = groebner_basis([P(Rxyz, g) for g in gens])
    theirs = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], *syms, order="grevlex")
    assert {_monic(to_sympy(g, syms), syms) for g in ours} == {_monic(g, syms) for g in theirs.exprs}


def test_membership_examples(Rxy):
    I = Ideal(Rxy, [P(Rxy, "x")])
    assert ideal_membership(P(Rxy, "x^2"), I)
    assert not ideal_membership(P(Rxy, "y"), I)


@pytest.mark.parametrize("seed", range(25))
def test_membership_matches_dense_linear_algebra(seed):
    R, gens, f, d = random_membership_pair(seed)
    assert Ideal(R, gens).contains(f) == dense_membership(R, gens, f, d)


def test_radical_membership(Rxy):
    assert radical_membership(P(Rxy, "x"), Ideal(Rxy, [P(Rxy, "x^2")]))
    assert not radical_membership(P(Rxy, "y"), Ideal(Rxy, [P(Rxy, "x")]))


@pytest.mark.parametrize("f,gens", [("x + y", ["x^3", "y^2"]), ("x*y", ["x^2*y", "y^3"]), ("x", ["x*y", "x^2 - y"]), ("y", ["x^2"])])
def test_radical_matches_bounded_powers(Rxy, f, gens):
    I = Ideal(Rxy, [P(Rxy, g) for g in gens])
    f = P(Rxy, f)
    bounded = any(ideal_membership(f ** m, I) for m in range(1, 9))
    assert radical_membership(f, I) == bounded


def test_regular_sequences(Rxy):
    x, y = Rxy.gens
    assert is_regular_sequence([x, y])
    assert not is_regular_sequence([x, x])
    assert not is_regular_sequence([x * y, x])


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_identity():
    U, D, V = smith_normal_form(mx.identity(ZZ, 3), ZZ)
    for M in (U, D, V):
        assert mx.equal(M, mx.identity(ZZ, 3))


def test_snf_diag_2_3():
    _, D, _ = smith_normal_form(mx.from_lists(ZZ, [[2, 0], [0, 3]], 2, 2), ZZ)
    assert [D[0, 0], D[1, 1]] == [1, 6]


@pytest.mark.parametrize("seed", range(20))
def test_snf_recomputes(seed):
    rng = random.Random(seed)
    rows = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
    M = mx.from_lists(ZZ, rows, 3, 3)
    U, D, V = smith_normal_form(M, ZZ)
    assert mx.equal(mx.mul(ZZ, mx.mul(ZZ, U, M), V), D)
    assert abs(sympy.Matrix(mx.to_lists(U)).det()) == 1
    assert abs(sympy.Matrix(mx.to_lists(V)).det()) == 1
    assert all(D[i, j] == 0 for i in range(3) for j in range(3) if i != j)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m))))
def test_snf_determinantal_divisors(rows):
    m, n = len(rows), len(rows[0])
    ours = [abs(int(v)) for v in invariant_factors(mx.from_lists(ZZ, rows, m, n), ZZ)]
    assert ours == determinantal_invariants(rows)


def test_snf_over_univariate_polynomials():
    R = parse_ring("QQ[t]")
    t = R.gens[0]
    M = mx.matrix(R, [[t, 0], [0, t * t - 1]])
    U, D, V = smith_normal_form(M, R)
    assert mx.equal(mx.mul(R, mx.mul(R, U, M), V), D)
    assert R.divides(D[0, 0], D[1, 1])


def test_module_type():
    M = PresentedModule(ZZ, 3, mx.from_lists(ZZ, [[2, 0], [0, -6], [0, 0]], 3, 2))
    assert module_type(M) == (1, ("2", "6"))


def test_snf_rejects_non_euclidean(Rxy):
    with pytest.raises(Exception):
        smith_normal_form(mx.identity(Rxy, 2), Rxy)
