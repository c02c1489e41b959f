"""Finitely presented modules: syzygies, injectivity, support, projective dimension."""

import itertools
import random

import pytest
import sympy

from koszulkit import matrix as mx
from koszulkit.fpmodules import (
    FpMap,
    ModuleMap,
    PresentedModule,
    homology_pair,
    is_injective,
    is_isomorphism,
    pd_at_most,
    power_annihilates,
    projective_dimension,
    supported_on,
    syzygies,
)
from koszulkit.rings import QQ, parse_ring


def P(R, s):
    return R.convert(s)


def quotient(R, *gens):
    return PresentedModule(R, 1, mx.matrix(R, [[P(R, g) for g in gens]]))


def row_map(R, *entries):
    return ModuleMap.from_matrix(R, mx.matrix(R, [[P(R, e) for e in entries]]))


def test_koszul_syzygy(Rxy):
    K = syzygies(row_map(Rxy, "x", "y"))
    G = K.embedding
    assert G.shape == (2, 1)
    y, x = G[0, 0], G[1, 0]
    c = y / P(Rxy, "y")
    assert c.is_constant() and x == -c * P(Rxy, "x")


def test_injective_map_has_no_syzygies(Rxy):
    assert syzygies(row_map(Rxy, "x")).embedding.shape[1] == 0


def _monos(nv, d):
    return [e for e in itertools.product(range(d + 1), repeat=nv) if sum(e) == d]


def _coeffs(R, p, d):
    idx = {e: i for i, e in enumerate(_monos(R.ngens, d))}
    v = [0] * len(idx)
    for e, c in p.terms.items():
        v[idx[e]] = sympy.Rational(int(c.numerator), int(c.denominator))
    return v


@pytest.mark.parametrize("seed", range(8))
def test_syzygies_match_degreewise_linear_algebra(seed):
    rng = random.Random(seed)
    R = parse_ring("QQ[x,y,z]")
    delta, n = rng.randint(1, 2), rng.randint(2, 3)
    fs = []
    for _ in range(n):
        p = R.zero
        for e in rng.sample(_monos(3, delta), 2):
            p = p + R.monomial(e, rng.randint(-2, 2) or 1)
        fs.append(p)
    f = ModuleMap.from_matrix(R, mx.matrix(R, [fs]))
    G = syzygies(f).embedding
    assert mx.is_zero(mx.mul(R, f.matrix, G))
    for d in range(0, 3):
        # dense kernel dimension in degree d
        cols = []
        for i in range(n):
            for m in _monos(3, d):
                cols.append(_coeffs(R, R.monomial(m, 1) * fs[i], d + delta))
        dim = len(cols) - sympy.Matrix(cols).T.rank() if cols else 0
        # degree-d part of the span of G (columns are homogeneous)
        vecs = []
        for j in range(G.shape[1]):
            col = [G[i, j] for i in range(n)]
            dg = max(c.degree() for c in col)
            assert all(not c or (c.is_homogeneous() and c.degree() == dg) for c in col)
            if dg > d:
                continue
            for m in _monos(3, d - dg):
                vecs.append(sum((_coeffs(R, R.monomial(m, 1) * c, d) for c in col), []))
        rank = sympy.Matrix(vecs).rank() if vecs else 0
        assert rank == dim


def test_injectivity_examples(Rxy):
    assert is_injective(row_map(Rxy, "x"))
    assert not is_injective(ModuleMap.from_matrix(Rxy, mx.zeros(Rxy, 1, 1)))
    assert not is_injective(row_map(Rxy, "x", "y"))


def test_power_annihilates(Rxy):
    assert power_annihilates(P(Rxy, "x"), quotient(Rxy, "x^2")) == 2
    assert power_annihilates(P(Rxy, "y"), quotient(Rxy, "x^2"), bound=8) is None
    assert power_annihilates(P(Rxy, "y"), PresentedModule(Rxy, 0)) == 1


def test_supported_on(Rxy):
    assert supported_on(quotient(Rxy, "x"), [P(Rxy, "x")])
    assert not supported_on(quotient(Rxy, "x"), [P(Rxy, "y")])
    assert supported_on(quotient(Rxy, "x^2", "x*y"), [P(Rxy, "x")])


def test_projective_dimension(Rxy):
    assert pd_at_most(PresentedModule.free(Rxy, 2), 0)
    assert pd_at_most(quotient(Rxy, "x"), 1)
    assert not pd_at_most(quotient(Rxy, "x", "y"), 1)
    assert projective_dimension(quotient(Rxy, "x", "y")) == 2
    assert projective_dimension(PresentedModule(Rxy, 0)) == -1


def test_projective_dimension_matches_koszul_resolution():
    R = parse_ring("QQ[x,y,z]")
    for k in range(1, 4):
        assert projective_dimension(quotient(R, *"xyz"[:k])) == k


def _free_map(R, rows, m, n):
    return FpMap(PresentedModule.free(R, n), PresentedModule.free(R, m), mx.matrix(R, rows, m, n))


def test_homology_pair(Rxy):
    zero = _free_map(Rxy, [[0]], 1, 1)
    assert homology_pair(zero, zero).relations.shape[1] == 0 or homology_pair(zero, zero).is_free_presentation()
    H = homology_pair(_free_map(Rxy, [[P(Rxy, "x")]], 1, 1), FpMap(PresentedModule.free(Rxy, 1), PresentedModule(Rxy, 0), mx.zeros(Rxy, 0, 1)))
    assert supported_on(H, [P(Rxy, "x")]) and not H.is_zero()
    assert power_annihilates(P(Rxy, "x"), H) == 1
    # middle of the Koszul complex A -> A^2 -> A on (x, y)
    x, y = Rxy.gens
    d2 = _free_map(Rxy, [[-y], [x]], 2, 1)
    d1 = _free_map(Rxy, [[x, y]], 1, 2)
    assert homology_pair(d2, d1).is_zero()


def test_is_isomorphism(Rxy):
    M = quotient(Rxy, "x", "y")
    assert is_isomorphism(M.identity())
    assert not is_isomorphism(FpMap(M, M, mx.matrix(Rxy, [[P(Rxy, "x")]])))
    assert is_isomorphism(FpMap(M, M, mx.matrix(Rxy, [[QQ.convert(3)]])))
