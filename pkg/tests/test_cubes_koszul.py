"""Cubes, totalization and the Koszul-cube layer."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulkit import matrix as mx
from koszulkit.complexes import ChainComplex, euler_characteristic, homology
from koszulkit.cubes import (
    Cube,
    CubeMap,
    h0_direction,
    h0_iterated,
    is_admissible,
    is_monic,
    totalize,
    verify_totisom,
)
from koszulkit.fpmodules import FpMap, PresentedModule, is_isomorphism
from koszulkit.koszul import (
    Inconclusive,
    MMParams,
    RegularSequence,
    ext_functor,
    h_functor,
    identity_iso,
    is_in_MM,
    is_koszul_cube,
    is_total_quasi_iso,
    quasi_split_witness,
    random_koszul_cube,
    res_functor,
    twist_cube,
    typ_cube,
    wgp_check,
)
from koszulkit.rings import QQ, parse_ring
from koszulkit.suite import LABELS, adversarial_cube, koszul_sample, sequence

seeds = st.integers(0, 10**6)


@pytest.fixture
def fxy(Rxy):
    return RegularSequence(Rxy, {"a": "x", "b": "y"})


def koszul_complex_xy(R):
    x, y = R.gens
    return ChainComplex(R, {0: 1, 1: 2, 2: 1}, {1: mx.matrix(R, [[x, y]]), 2: mx.matrix(R, [[-y], [x]])})


def same_module(M, N):
    """Identity on generators is an isomorphism."""
    if M.ngens != N.ngens:
        return False
    I = mx.identity(M.ring, M.ngens)
    return FpMap(M, N, I, check=False).is_well_defined() and FpMap(N, M, I, check=False).is_well_defined()


def test_monic_examples(Rxy, fxy):
    x1 = typ_cube(RegularSequence(Rxy, {"a": "x"}))
    assert is_monic(x1)
    assert is_monic(typ_cube(fxy))
    bad = Cube.free(Rxy, ("a",), {frozenset(): 1, frozenset("a"): 1}, {}, check=False)
    assert not is_monic(bad)
    assert not is_admissible(bad)


def test_h0_direction(Rxy, fxy):
    x1 = typ_cube(RegularSequence(Rxy, {"a": "x"}))
    h = h0_direction(x1, "a")
    assert h.directions == () or list(h.directions) == []
    assert same_module(h.vertices[frozenset()], PresentedModule(Rxy, 1, mx.matrix(Rxy, [[Rxy.gens[0]]])))
    h2 = h0_direction(typ_cube(fxy), "a")
    assert list(h2.directions) == ["b"]
    assert mx.equal(h2.d(frozenset("b"), "b"), mx.matrix(Rxy, [[Rxy.gens[1]]]))
    ident = Cube.free(Rxy, ("a",), {frozenset(): 1, frozenset("a"): 1},
                      {(frozenset("a"), "a"): mx.identity(Rxy, 1)}, check=False)
    assert h0_direction(ident, "a").vertices[frozenset()].is_zero()


def test_h0_iterated(Rxy, fxy):
    x = typ_cube(fxy)
    assert h0_iterated(x, []) == x
    top = h0_iterated(x).vertices[frozenset()]
    assert same_module(top, PresentedModule(Rxy, 1, mx.matrix(Rxy, [list(Rxy.gens)])))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_h0_order_independence(seed):
    fs, x = koszul_sample(seed)
    dirs = list(x.directions)
    if len(dirs) < 2:
        return
    a = x
    for k in dirs:
        a = h0_direction(a, k)
    b = x
    for k in reversed(dirs):
        b = h0_direction(b, k)
    assert identity_iso(a, b)


def test_totalize_small(Rxy, fxy):
    z = Cube.free(Rxy, (), {frozenset(): 2}, {}, check=False)
    assert totalize(z) == ChainComplex.concentrated(Rxy, 2, 0)
    x1 = typ_cube(RegularSequence(Rxy, {"a": "x"}))
    assert totalize(x1) == ChainComplex(Rxy, {0: 1, 1: 1}, {1: mx.matrix(Rxy, [[Rxy.gens[0]]])})
    T = totalize(typ_cube(fxy))
    assert [T.rank(n) for n in range(3)] == [1, 2, 1] and T.is_complex()
    # the Koszul complex up to the sign of basis vectors
    K = koszul_complex_xy(Rxy)
    for n in (1, 2):
        assert all(T.d(n)[i, j] in (K.d(n)[i, j], -K.d(n)[i, j])
                   for i in range(T.d(n).shape[0]) for j in range(T.d(n).shape[1]))


def test_totisom_typ(Rxy, fxy):
    rep = verify_totisom(typ_cube(fxy))
    assert rep.passed
    assert same_module(rep.h0_cube, PresentedModule(Rxy, 1, mx.matrix(Rxy, [list(Rxy.gens)])))


def test_totisom_zero_cube(Rxy):
    z = Cube.zero(Rxy, ("a", "b"))
    rep = verify_totisom(z)
    assert rep.passed and all(homology(rep.tot, n).is_zero() for n in range(3))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_generated_cubes(seed):
    fs, x = koszul_sample(seed)
    assert is_koszul_cube(x, fs)
    assert is_admissible(x)
    assert verify_totisom(x).passed
    assert is_in_MM(x, MMParams(frozenset(), fs.labels, 0), fs)


def test_random_cube_is_deterministic():
    fs = sequence(1, 3)
    assert random_koszul_cube(fs, seed=5) == random_koszul_cube(fs, seed=5)


def test_koszul_examples(Rxy):
    fs = RegularSequence(Rxy, {"a": "x^2", "b": "y"})
    assert is_koszul_cube(typ_cube(fs), fs)
    bad = Cube.free(Rxy, ("a",), {frozenset(): 1, frozenset("a"): 1},
                    {(frozenset("a"), "a"): mx.zeros(Rxy, 1, 1)}, check=False)
    assert not is_koszul_cube(bad, RegularSequence(Rxy, {"a": "x"}))


def test_twisted_typ_cube_is_koszul(Rxy, fxy):
    x = typ_cube(fxy, {"a": 2, "b": 1})
    x = Cube.free(Rxy, x.directions, {T: 1 for T in x.subsets()}, dict(x.boundaries), check=False)
    from koszulkit.koszul import direct_sum_cubes

    y = direct_sum_cubes([x, x])
    g, gi = {}, {}
    for T in y.subsets():
        c = Rxy.gens[len(T) % 2] * (1 + len(T))
        g[T] = mx.matrix(Rxy, [[1, c], [0, 1]])
        gi[T] = mx.matrix(Rxy, [[1, -c], [0, 1]])
    assert is_koszul_cube(twist_cube(y, g, gi), fxy)


def test_typ_euler_vanishes(fxy):
    for a in range(1, 4):
        for b in range(1, 4):
            assert euler_characteristic(totalize(typ_cube(fxy, {"a": a, "b": b}))) == 0


def test_support_bound_is_inconclusive():
    R = parse_ring("QQ[x,y]")
    fs = RegularSequence(R, {"a": "x"})
    x = Cube.free(R, ("a",), {frozenset(): 1, frozenset("a"): 1},
                  {(frozenset("a"), "a"): mx.matrix(R, [[R.convert("x^5")]])}, check=False)
    assert is_koszul_cube(x, fs)
    with pytest.raises(Inconclusive):
        is_koszul_cube(x, fs, bound=2)


@pytest.mark.parametrize("seed", range(30))
def test_adversarial_cubes_rejected(seed):
    fs, x, kind = adversarial_cube(seed)
    assert not is_koszul_cube(x, fs)
    assert not is_in_MM(x, MMParams(frozenset(), fs.labels, 0), fs)


def test_mm_examples(Rxy, fxy):
    assert is_in_MM(Cube.zero(Rxy, ("a", "b")), MMParams(frozenset(), ("a", "b"), 0), fxy)
    x = typ_cube(fxy)
    y = h_functor(x, ("a",))
    assert is_in_MM(y, MMParams(frozenset("a"), ("b",), 1), fxy)
    assert not is_in_MM(y, MMParams(frozenset("a"), ("b",), 0), fxy)


def test_functor_examples(Rxy, fxy):
    x = typ_cube(RegularSequence(Rxy, {"a": "x"}))
    e = ext_functor(x, ("b",))
    assert res_functor(e, ("b",), 0) == x and res_functor(e, ("b",), 1) == x
    z = Cube.zero(Rxy, ("a",))
    assert ext_functor(z, ("b",)).is_zero()
    assert identity_iso(h_functor(ext_functor(x, ("b",)), ("a",)), ext_functor(h_functor(x, ("a",)), ("b",)))


def test_total_quasi_iso_examples(Rxy, fxy):
    x = typ_cube(fxy)
    assert is_total_quasi_iso(CubeMap.identity(x))
    two = CubeMap(x, x, {T: mx.scalar(Rxy, 1, QQ.convert(2)) for T in x.subsets()})
    assert is_total_quasi_iso(two)
    fx = CubeMap(x, x, {T: mx.scalar(Rxy, 1, Rxy.gens[0]) for T in x.subsets()})
    assert not is_total_quasi_iso(fx)


def test_quasi_split_zero_cube(Rxy, fxy):
    z = Cube.zero(Rxy, ("a", "b"))
    rep = quasi_split_witness(z, MMParams(frozenset(), ("a", "b"), 0), fxy)
    assert rep.passed and rep.r.is_zero() and rep.s.is_zero()


def test_quasi_split_of_a_quotient(Rxy, fxy):
    M = PresentedModule(Rxy, 1, mx.matrix(Rxy, [list(Rxy.gens)]))
    s = Cube(Rxy, (), {frozenset(): M}, {}, check=False)
    rep = quasi_split_witness(s, MMParams(frozenset("ab"), (), 2), fxy)
    assert rep.passed
    assert all(v.is_zero() for v in rep.r.vertices.values())


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_quasi_split_generated(seed):
    fs, x = koszul_sample(seed)
    rep = quasi_split_witness(x, MMParams(frozenset(), fs.labels, 0), fs)
    assert rep.passed


def test_wgp(Rxy, fxy):
    assert wgp_check(typ_cube(fxy), fxy).passed
    assert wgp_check(Cube.zero(Rxy, ("a", "b")), fxy).passed
