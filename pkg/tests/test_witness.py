"""Double complexes, outer totalization and zig-zag certificates."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulkit import matrix as mx
from koszulkit import witness as wt
from koszulkit.complexes import ChainComplex, ChainMap, PreconditionError, cone, euler_characteristic, shift
from koszulkit.rings import ZZ
from koszulkit.snf import module_type
from koszulkit.witness import DoubleComplex, DoubleMap, Step

seeds = st.integers(0, 10**6)


def two_term(f):
    """``[x --f--> y]`` in outer degrees 1, 0."""
    return DoubleComplex(f.ring, {1: f.domain, 0: f.codomain}, {1: f})


def sample_map():
    x = ChainComplex(ZZ, {0: 1, 1: 1}, {1: mx.matrix(ZZ, [[2]])})
    y = ChainComplex(ZZ, {0: 1, 1: 2}, {1: mx.matrix(ZZ, [[1, 3]])})
    return ChainMap(x, y, {0: mx.matrix(ZZ, [[1]]), 1: mx.matrix(ZZ, [[2], [0]])})


def test_tot_of_concentrated():
    K = sample_map().codomain
    assert wt.tot_outer(DoubleComplex.concentrated(K, 0)) == K


def test_tot_of_two_term_is_cone():
    f = sample_map()
    assert f.commutes()
    assert wt.tot_outer(two_term(f)) == cone(f)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_tot_euler_characteristic(seed):
    X = wt.random_double_complex(seed)
    T = wt.tot_outer(X)
    assert T.is_complex()
    assert euler_characteristic(T) == sum((-1) ** n * euler_characteristic(X.entry(n)) for n in X.degrees())


def test_verify_step_identity():
    X = wt.random_double_complex(3)
    for tag in ("qis", "lw"):
        assert wt.verify_step(Step(X, X, DoubleMap.identity(X), "->", tag))


def test_verify_step_lw():
    F = wt.random_lw_map(11)
    assert wt.verify_step(Step(F.domain, F.codomain, F, "->", "lw"))


def test_verify_step_rejects_non_qis():
    f = sample_map()
    X = two_term(f)
    assert not X.is_row_exact()
    assert not wt.verify_step(Step(X, X, DoubleMap.zero(X, X), "->", "qis"))


def test_zigzag_concentrated_is_empty():
    X = DoubleComplex.concentrated(sample_map().domain, 2)
    cert = wt.zigzag_to_tot(X)
    assert cert.steps == [] and cert.verify()


def test_zigzag_length_one():
    X = two_term(sample_map())
    cert = wt.zigzag_to_tot(X)
    assert cert.tags() == [("->", "qis"), ("<-", "lw")]
    assert cert.end == DoubleComplex.concentrated(shift(wt.tot_outer(X), 0), 0)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_zigzag_random(seed):
    X = wt.random_double_complex(seed)
    cert = wt.zigzag_to_tot(X)
    assert cert.verify()
    m = cert.header.get("outer_degree", 0)
    if not X.is_zero():
        assert cert.end == DoubleComplex.concentrated(shift(wt.tot_outer(X), m), m)


def test_solid_identity():
    X = two_term(sample_map())
    cert = wt.solid_witness(DoubleMap.identity(X))
    assert cert.verify() and cert.end.is_levelwise_acyclic()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_solid_random(seed):
    cert = wt.solid_witness(wt.random_lw_map(seed))
    assert cert.verify() and cert.end.is_levelwise_acyclic()


def test_solid_precondition():
    X = two_term(sample_map())
    with pytest.raises(PreconditionError):
        wt.solid_witness(DoubleMap.zero(X, X))


def _homology_types(X):
    return {k: module_type(h) for k, h in wt.total_homology_table(X).items() if module_type(h) != (0, ())}


@pytest.mark.parametrize("which", ["zero", "identity"])
def test_cone_compare_basic(which):
    X = two_term(sample_map())
    F = DoubleMap.zero(X, X) if which == "zero" else DoubleMap.identity(X)
    cert = wt.cone_compare(F)
    assert cert.verify()
    assert _homology_types(wt.cone_A(F)) == _homology_types(wt.cone_B(F))
    if which == "identity":
        assert _homology_types(wt.cone_B(F)) == {}


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_cone_compare_random(seed):
    F = wt.random_double_map(seed)
    assert wt.cone_compare(F).verify()
    assert _homology_types(wt.cone_A(F)) == _homology_types(wt.cone_B(F))


def test_certificate_composition():
    X = wt.random_double_complex(5)
    a = wt.zigzag_to_tot(X)
    Y = a.end
    b = wt.ZigzagCertificate(Y, Y, [Step(Y, Y, DoubleMap.identity(Y), "->", "lw")], {})
    assert a.then(b).verify()


def test_mislabeled_certificate_fails():
    X = two_term(sample_map())
    cert = wt.zigzag_to_tot(X)
    lw = cert.steps[1]
    bad = wt.ZigzagCertificate(cert.start, cert.end,
                               [cert.steps[0], Step(lw.left, lw.right, lw.morphism, lw.orientation, "qis")],
                               cert.header)
    assert not bad.verify()
