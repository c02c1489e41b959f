"""Koszul cubes and the categories ``M_A(f_U; f_V)(p)``.

A regular sequence is a mapping from direction labels to homogeneous
polynomials.  Cubes in ``M_A(f_U; f_V)(p)`` are V-cubes whose iterated
cokernels ``H₀^T`` have vertices supported on ``V(f_{T ∪ U})`` and of
projective dimension at most ``p + #T``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import matrix as mx
from .complexes import exact_at
from .cubes import Cube, CubeMap, _quotient_cube, is_admissible, subsets, totalize, verify_totisom
from .fpmodules import FpMap, PresentedModule, is_isomorphism, pd_at_most, power_annihilates, supported_on
from .groebner import is_regular_sequence
from .linalg import contains_all, kernel, solve

__all__ = [
    "Inconclusive",
    "RegularSequence",
    "MMParams",
    "is_koszul_cube",
    "koszul_report",
    "typ_cube",
    "random_koszul_cube",
    "random_mm_cube",
    "is_in_MM",
    "ext_functor",
    "res_functor",
    "h_functor",
    "identity_iso",
    "is_total_quasi_iso",
    "quasi_split_witness",
    "QuasiSplitReport",
    "wgp_check",
    "WgpReport",
    "direct_sum_cubes",
    "twist_cube",
    "tensor_cubes",
    "SEQUENCE_FAMILIES",
]

DEFAULT_BOUND = 16


class Inconclusive(Exception):
    """A search bound was exhausted before a definite answer was found."""


class RegularSequence:
    """Labelled family ``f_S``; validated as a regular sequence in every order."""

    def __init__(self, ring, family, check=True):
        self.ring = ring
        self.family = {k: ring.convert(v) for k, v in dict(family).items()}
        self.labels = tuple(self.family)
        if check and self.family and not is_regular_sequence(list(self.family.values())):
            raise ValueError("not a regular sequence (in some order) or not proper")

    def __getitem__(self, k):
        return self.family[k]

    def sub(self, labels):
        return [self.family[k] for k in self.labels if k in set(labels)]

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        body = ", ".join(f"{k}={v}" for k, v in self.family.items())
        return f"RegularSequence({body})"


@dataclass(frozen=True)
class MMParams:
    U: frozenset
    V: tuple
    p: int = 0

    def __post_init__(self):
        object.__setattr__(self, "U", frozenset(self.U))
        object.__setattr__(self, "V", tuple(self.V))
        if self.U & set(self.V):
            raise ValueError("U and V must be disjoint")
        if self.p < 0:
            raise ValueError("p must be nonnegative")


def _as_sequence(fs, ring=None):
    if isinstance(fs, RegularSequence):
        return fs
    return RegularSequence(ring, fs, check=False)


# ---------------------------------------------------------------------------
# validators


@dataclass
class KoszulReport:
    ok: bool
    inconclusive: bool = False
    reasons: list = field(default_factory=list)
    exponents: dict = field(default_factory=dict)


def _fmt(x, T):
    return "{" + ",".join(x.ordered(T)) + "}"


def koszul_report(x, fs, bound=DEFAULT_BOUND):
    fs = _as_sequence(fs, x.ring)
    rep = KoszulReport(True)
    missing = [k for k in x.directions if k not in fs.family]
    if missing:
        raise ValueError(f"directions without a sequence element: {missing}")
    for T in x.subsets():
        v = x.vertices[T]
        if not v.is_free_presentation() and not pd_at_most(v, 0):
            rep.ok = False
            rep.reasons.append(f"vertex {_fmt(x, T)} is not projective")
    for (T, k), M in x.boundaries.items():
        if not x.boundary_map(T, k).is_injective():
            rep.ok = False
            rep.reasons.append(f"d^{k} at {_fmt(x, T)} is not injective")
    if not rep.ok:
        return rep
    for (T, k) in x.boundaries:
        coker = x.boundary_map(T, k).cokernel()
        m = power_annihilates(fs[k], coker, bound)
        if m is not None:
            rep.exponents[(T, k)] = m
        elif not supported_on(coker, [fs[k]]):
            rep.ok = False
            rep.reasons.append(f"coker d^{k} at {_fmt(x, T)} is not supported on V(f_{k})")
        else:
            rep.inconclusive = True
            rep.reasons.append(f"coker d^{k} at {_fmt(x, T)}: no power of f_{k} up to {bound}")
    return rep


def is_koszul_cube(x, fs, bound=DEFAULT_BOUND):
    """Koszul cube test; raises :class:`Inconclusive` if only the power bound fails."""
    rep = koszul_report(x, fs, bound)
    if not rep.ok:
        return False
    if rep.inconclusive:
        raise Inconclusive("; ".join(rep.reasons))
    return True


def mm_report(x, params, fs):
    """Per-vertex membership failures of ``x`` in ``M_A(f_U; f_V)(p)``."""
    fs = _as_sequence(fs, x.ring)
    if set(x.directions) != set(params.V):
        raise ValueError("cube directions must equal V")
    if not is_admissible(x):
        return ["cube is not admissible"]
    bad = []
    for T in x.subsets():
        y = x if not T else _quotient_cube(x, T)
        labels = set(T) | params.U
        seq = fs.sub(labels)
        for R in y.subsets():
            v = y.vertices[R]
            where = f"H0^{_fmt(x, T)} at {y.ordered(R)}"
            if not supported_on(v, seq):
                bad.append(f"{where}: support not in V(f_{sorted(labels, key=str)})")
            elif not pd_at_most(v, params.p + len(T)):
                bad.append(f"{where}: projective dimension exceeds {params.p + len(T)}")
    return bad


def is_in_MM(x, params, fs, bound=DEFAULT_BOUND):
    """Membership in ``⋉_{T ⊆ V} M_A^{f_{T ∪ U}}(p + #T)``."""
    return not mm_report(x, params, fs)


# ---------------------------------------------------------------------------
# generators


def typ_cube(fs, exponents=None, directions=None):
    """Vertex ``A`` everywhere, ``d^k_T`` multiplication by ``f_k^{a_k}``."""
    ring = fs.ring
    directions = tuple(directions or fs.labels)
    exponents = exponents or {}
    verts = {T: 1 for T in subsets(directions)}
    bnd = {}
    for T in subsets(directions):
        for k in T:
            bnd[(T, k)] = mx.matrix(ring, [[fs[k] ** exponents.get(k, 1)]])
    return Cube.free(ring, directions, verts, bnd, check=False)


def direct_sum_cubes(cubes):
    x0 = cubes[0]
    R = x0.ring
    verts = {T: PresentedModule(R, sum(c.rank(T) for c in cubes),
                                mx.block_diag(R, [c.vertices[T].relations for c in cubes]))
             for T in x0.subsets()}
    bnd = {key: mx.block_diag(R, [c.boundaries[key] for c in cubes]) for key in x0.boundaries}
    return Cube(R, x0.directions, verts, bnd, check=False)


def twist_cube(x, g, ginv):
    """Conjugate by vertex automorphisms: ``d' = g_{T-k} d g_T^{-1}``."""
    R = x.ring
    verts = {T: PresentedModule(R, v.ngens, mx.mul(R, g[T], v.relations)) for T, v in x.vertices.items()}
    bnd = {(T, k): mx.mul(R, mx.mul(R, g[T - {k}], M), ginv[T]) for (T, k), M in x.boundaries.items()}
    return Cube(R, x.directions, verts, bnd, check=False)


def tensor_cubes(x, y):
    """External tensor product of cubes on disjoint direction lists (free vertices)."""
    if set(x.directions) & set(y.directions):
        raise ValueError("direction lists must be disjoint")
    R = x.ring
    dirs = x.directions + y.directions
    verts, bnd = {}, {}
    for T in subsets(dirs):
        Tx, Ty = T & set(x.directions), T & set(y.directions)
        verts[T] = x.rank(Tx) * y.rank(Ty)
        for k in T:
            if k in Tx:
                M = _kron(R, x.d(Tx, k), mx.identity(R, y.rank(Ty)))
            else:
                M = _kron(R, mx.identity(R, x.rank(Tx)), y.d(Ty, k))
            bnd[(T, k)] = M
    return Cube.free(R, dirs, verts, bnd, check=False)


def _kron(R, A, B):
    (a, b), (c, d) = A.shape, B.shape
    out = mx.zeros(R, a * c, b * d)
    for i in range(a):
        for j in range(b):
            if A[i, j]:
                out[i * c:(i + 1) * c, j * d:(j + 1) * d] = mx.scale(R, B, A[i, j]) if A[i, j] != R.one else B
    return out


SEQUENCE_FAMILIES = (
    ("x", "y", "z"),
    ("x^2", "y", "z"),
    ("x", "y^2", "z + x"),
    ("x + y", "y^2", "z^2"),
    ("x*y", "z", "x + y"),
)


def _graded_automorphism(ring, degs, rng, steps=3):
    n = len(degs)
    g = mx.identity(ring, n)
    gi = mx.identity(ring, n)
    nv = ring.ngens
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        gap = degs[j] - degs[i]
        if gap < 0:
            continue
        exps = [0] * nv
        for _ in range(gap):
            exps[rng.randrange(nv)] += 1
        c = rng.choice((1, -1, 2))
        m = ring.monomial(exps, c)
        # E = I + m e_ij ; E^{-1} = I - m e_ij
        E = mx.identity(ring, n)
        E[i, j] = m
        Ei = mx.identity(ring, n)
        Ei[i, j] = -m
        g = mx.mul(ring, E, g)
        gi = mx.mul(ring, gi, Ei)
    return g, gi


def random_koszul_cube(fs, params=None, seed=0):
    """Deterministic random Koszul cube: twisted direct sum of typ cubes.

    ``params`` may set ``max_rank`` (default 4), ``max_exponent`` (3) and
    ``twist`` (True).
    """
    params = dict(params or {})
    rng = random.Random(seed)
    ring = fs.ring
    dirs = tuple(params.get("directions", fs.labels))
    rank = rng.randint(1, params.get("max_rank", 4))
    top = params.get("max_exponent", 3)
    pieces, expo = [], []
    for _ in range(rank):
        e = {k: rng.randint(1, top) for k in dirs}
        pieces.append(typ_cube(fs, e, dirs))
        expo.append(e)
    x = direct_sum_cubes(pieces)
    if not params.get("twist", True):
        return x
    fdeg = {k: fs[k].degree() for k in dirs}
    g, gi = {}, {}
    for T in x.subsets():
        degs = [sum(e[k] * fdeg[k] for k in T) for e in expo]
        g[T], gi[T] = _graded_automorphism(ring, degs, rng)
    return twist_cube(x, g, gi)


def random_mm_cube(fs, U, seed=0, params=None):
    """A cube in ``M_A(f_U; f_V)(#U)``: ``H₀^U`` of a random Koszul cube."""
    x = random_koszul_cube(fs, params, seed)
    return _quotient_cube(x, frozenset(U))


# ---------------------------------------------------------------------------
# extension, restriction and homology functors


def ext_functor(x, W, directions=None):
    """Add directions ``W`` with identity boundaries."""
    W = tuple(w for w in W if w not in x.directions)
    if not W:
        raise ValueError("W must be nonempty and disjoint from the cube's directions")
    dirs = tuple(directions) if directions else x.directions + W
    if set(dirs) != set(x.directions) | set(W):
        raise ValueError("direction list does not match")
    R = x.ring
    Wset = set(W)
    verts, bnd = {}, {}
    for T in subsets(dirs):
        base = T - Wset
        verts[T] = x.vertices[base]
        for k in T:
            if k in Wset:
                bnd[(T, k)] = mx.identity(R, x.rank(base))
            else:
                bnd[(T, k)] = x.d(base, k)
    return Cube(R, dirs, verts, bnd, check=False)


def res_functor(x, W, j):
    """The face of ``x`` where every direction in ``W`` is ``j`` (0 or 1)."""
    if j not in (0, 1):
        raise ValueError("j must be 0 or 1")
    Wset = set(W)
    if not Wset or not Wset <= set(x.directions):
        raise ValueError("W must be a nonempty subset of the directions")
    rest = tuple(k for k in x.directions if k not in Wset)
    add = frozenset(Wset) if j else frozenset()
    verts = {T: x.vertices[T | add] for T in subsets(rest)}
    bnd = {(T, k): x.d(T | add, k) for T in subsets(rest) for k in T}
    return Cube(x.ring, rest, verts, bnd, check=False)


def h_functor(x, W):
    """Iterated direction cokernels along ``W``."""
    Wset = frozenset(W)
    if not Wset or not Wset <= set(x.directions):
        raise ValueError("W must be a nonempty subset of the directions")
    return _quotient_cube(x, Wset)


def identity_iso(x, y):
    """True iff the identity on generators is an isomorphism of cubes ``x ≅ y``."""
    if set(x.directions) != set(y.directions):
        return False
    R = x.ring
    for T in x.subsets():
        a, b = x.vertices[T], y.vertices[T]
        if a.ngens != b.ngens:
            return False
        I = mx.identity(R, a.ngens)
        f, g = FpMap(a, b, I, check=False), FpMap(b, a, I, check=False)
        if not (f.is_well_defined() and g.is_well_defined()):
            return False
    for (T, k), M in x.boundaries.items():
        if not x.vertices[T - {k}].contains_matrix(mx.sub(M, y.d(T, k))):
            return False
    return True


# ---------------------------------------------------------------------------
# total quasi-isomorphisms


def _h0_map(f):
    empty = frozenset()
    full = frozenset(f.domain.directions)
    src = _quotient_cube(f.domain, full).vertices[empty]
    dst = _quotient_cube(f.codomain, full).vertices[empty]
    return FpMap(src, dst, f.maps[empty], check=False)


def is_total_quasi_iso(f, params=None, fs=None, check=False):
    """True iff ``H₀^V(f)`` is an isomorphism."""
    if check:
        for c in (f.domain, f.codomain):
            if not is_in_MM(c, params, fs):
                raise ValueError("cube is outside M_A(f_U; f_V)(p)")
    if not f.is_natural():
        raise ValueError("not a natural transformation")
    h = _h0_map(f)
    if not h.is_well_defined():
        raise ValueError("induced map on H₀ is ill-defined")
    return is_isomorphism(h)


# ---------------------------------------------------------------------------
# quasi-split witness


@dataclass
class QuasiSplitReport:
    r: Cube
    s: Cube
    A: CubeMap
    C: CubeMap
    exact: bool
    offending: list
    r_trivial: bool
    r_member: bool
    alpha_beta: bool
    details: list = field(default_factory=list)

    @property
    def passed(self):
        return self.exact and self.r_trivial and self.r_member and self.alpha_beta


def _s_cube(R, dirs, M):
    return Cube(R, dirs, {frozenset(): M}, {}, check=False)


def _r_cube(x):
    R = x.ring
    empty = frozenset()
    base = x.vertices[empty]
    blocks = [x.d(frozenset([v]), v) for v in x.directions]
    G = mx.hstack(R, blocks, base.ngens)
    rel = kernel(R, G, base.relations)
    verts = dict(x.vertices)
    verts[empty] = PresentedModule(R, G.shape[1], rel)
    bnd = dict(x.boundaries)
    col = 0
    for v in x.directions:
        T = frozenset([v])
        n = x.rank(T)
        M = mx.zeros(R, G.shape[1], n)
        for i in range(n):
            M[col + i, i] = R.one
        bnd[(T, v)] = M
        col += n
    r = Cube(R, x.directions, verts, bnd, check=False)
    incl = {T: (G if not T else mx.identity(R, x.rank(T))) for T in x.subsets()}
    return r, CubeMap(r, x, incl)


def _lift_mono(A, a, T):
    """``α_T`` with ``A_T α_T = a_T`` (``A_T`` injective)."""
    R = A.domain.ring
    tgt = A.codomain.vertices[T]
    return solve(R, A.maps[T], a.maps[T], tgt.relations)


def _exact_at_vertex(A, C, T):
    R = A.domain.ring
    a, c = A.vertex_map(T), C.vertex_map(T)
    if not (a.is_well_defined() and c.is_well_defined()):
        return False
    if not a.is_injective() or not c.is_surjective():
        return False
    if not c.compose(a).is_zero():
        return False
    K = c.kernel_generators()
    mid = A.codomain.vertices[T]
    mod = mx.hstack(R, [mid.relations, A.maps[T]], mid.ngens)
    return contains_all(R, mod, K, rank=mid.ngens) if K.shape[1] else True


def _comparison(A, C, a, c):
    """Unique α, β with ``A α = a`` and ``β c = C``; checks they are isomorphisms."""
    R = A.domain.ring
    ok = True
    for T in A.domain.subsets():
        if not A.vertex_map(T).is_injective():
            return False
        al = _lift_mono(A, a, T)
        if al is None:
            return False
        f = FpMap(a.domain.vertices[T], A.domain.vertices[T], al, check=False)
        ok = ok and f.is_well_defined() and is_isomorphism(f)
    for T in C.domain.subsets():
        tgt = C.codomain.vertices[T]
        src = c.codomain.vertices[T]
        if not src.ngens:
            continue
        # β on generators of the target of c: pick preimages under c and push through C
        pre = solve(R, c.maps[T], mx.identity(R, src.ngens), src.relations)
        if pre is None:
            return False
        beta = mx.mul(R, C.maps[T], pre)
        b = FpMap(src, tgt, beta, check=False)
        if not b.is_well_defined():
            return False
        if not tgt.contains_matrix(mx.sub(mx.mul(R, beta, c.maps[T]), C.maps[T])):
            return False
        ok = ok and is_isomorphism(b) and c.vertex_map(T).is_surjective()
    return ok


def quasi_split_witness(x, params, fs, check_membership=True, twist_seed=0):
    """Build ``r(x) ↣ x ↠ s(H₀^V x)`` and verify the three properties."""
    fs = _as_sequence(fs, x.ring)
    if check_membership and not is_in_MM(x, params, fs):
        raise ValueError("cube is not in M_A(f_U; f_V)(p)")
    R = x.ring
    empty = frozenset()
    dirs = x.directions
    M = _quotient_cube(x, frozenset(dirs)).vertices[empty]
    s = _s_cube(R, dirs, M)
    C = CubeMap(x, s, {empty: mx.identity(R, x.rank(empty))})
    r, A = _r_cube(x)
    offending = [x.ordered(T) for T in x.subsets() if not _exact_at_vertex(A, C, T)]
    h0r = _quotient_cube(r, frozenset(dirs)).vertices[empty]
    trivial = h0r.is_zero()
    member = True
    if check_membership:
        member = is_in_MM(r, MMParams(params.U, params.V, params.p + len(dirs)), fs)
    # α, β for the sequence itself and for a twisted copy of it
    ab = _comparison(A, C, A, C)
    rng = random.Random(twist_seed)
    g = {T: mx.scalar(R, r.rank(T), rng.choice((-1, 2, -3))) for T in r.subsets()}
    a2 = A.compose(CubeMap(r, r, g))
    h = {empty: mx.scalar(R, M.ngens, rng.choice((-1, 3)))}
    c2 = CubeMap(s, s, h).compose(C)
    ab = ab and _comparison(A, C, a2, c2)
    return QuasiSplitReport(r, s, A, C, not offending, offending, trivial, member, ab)


# ---------------------------------------------------------------------------
# weak geometric presentation


@dataclass
class WgpReport:
    chain_map: bool
    higher_vanish: bool
    h0_iso: bool
    totisom_agrees: bool

    @property
    def passed(self):
        return self.chain_map and self.higher_vanish and self.h0_iso and self.totisom_agrees


def wgp_check(x, fs=None, bound=DEFAULT_BOUND, validate=True):
    """Quotient map ``Tot x -> H₀^S(x)`` (degree 0) is a quasi-isomorphism."""
    if validate and fs is not None and not is_koszul_cube(x, fs, bound):
        raise ValueError("not a Koszul cube")
    R = x.ring
    tot = totalize(x)
    empty = frozenset()
    target = _quotient_cube(x, frozenset(x.directions)).vertices[empty]
    q = FpMap(PresentedModule(R, tot.rank(0)), target, mx.identity(R, tot.rank(0)), check=False)
    # chain map: q ∘ d_1 = 0 in the target
    chain = target.contains_matrix(mx.mul(R, q.matrix, tot.d(1))) if tot.rank(1) else True
    higher = all(exact_at(tot, n) for n in range(1, len(x.directions) + 1))
    h0_tot = PresentedModule(R, tot.rank(0), tot.d(1))
    induced = FpMap(h0_tot, target, q.matrix, check=False)
    iso = induced.is_well_defined() and is_isomorphism(induced)
    rep = verify_totisom(x, check_admissible=False)
    agrees = rep.passed == (higher and iso)
    return WgpReport(chain, higher, iso, agrees)
