"""S-cubes of modules: boundaries, direction-wise H₀, admissibility and Tot.

A cube over the direction list ``S`` assigns a :class:`PresentedModule` to
every subset ``T`` of ``S`` and a matrix ``d^k_T : x_T -> x_{T - {k}}`` to
every ``k`` in ``T``.  Subsets are frozensets of labels; the order of ``S``
fixes the Tot signs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import matrix as mx
from .complexes import ChainComplex, ChainMap, exact_at
from .fpmodules import FpMap, PresentedModule, is_isomorphism

__all__ = [
    "Cube",
    "CubeMap",
    "subsets",
    "is_monic",
    "h0_direction",
    "h0_iterated",
    "is_admissible",
    "totalize",
    "totalize_map",
    "verify_totisom",
    "TotisomReport",
    "NotAdmissible",
]


class NotAdmissible(ValueError):
    pass


def subsets(S):
    """All subsets of the ordered list ``S``, by size then stored order."""
    S = list(S)
    out = []
    for n in range(len(S) + 1):
        for c in itertools.combinations(S, n):
            out.append(frozenset(c))
    return out


class Cube:
    """Contravariant functor from subsets of ``directions`` to presented modules."""

    def __init__(self, ring, directions, vertices, boundaries, check=True):
        self.ring = ring
        self.directions = tuple(directions)
        if len(set(self.directions)) != len(self.directions):
            raise ValueError("direction labels must be distinct")
        self._index = {k: i for i, k in enumerate(self.directions)}
        self.vertices = {}
        for T in subsets(self.directions):
            v = vertices.get(T)
            if v is None:
                v = PresentedModule(ring, 0)
            elif isinstance(v, int):
                v = PresentedModule(ring, v)
            self.vertices[T] = v
        self.boundaries = {}
        for T in subsets(self.directions):
            for k in T:
                src, dst = self.vertices[T], self.vertices[T - {k}]
                M = boundaries.get((T, k))
                if M is None:
                    M = mx.zeros(ring, dst.ngens, src.ngens)
                if M.shape != (dst.ngens, src.ngens):
                    raise ValueError(f"boundary d^{k}_{sorted(T, key=self._index.get)} has shape {M.shape}")
                self.boundaries[(T, k)] = M
        if check:
            self.validate()

    # -- helpers
    def ordered(self, T):
        return sorted(T, key=self._index.__getitem__)

    def subsets(self):
        return subsets(self.directions)

    def vertex(self, T):
        return self.vertices[frozenset(T)]

    def d(self, T, k):
        return self.boundaries[(frozenset(T), k)]

    def boundary_map(self, T, k):
        T = frozenset(T)
        return FpMap(self.vertices[T], self.vertices[T - {k}], self.boundaries[(T, k)], check=False)

    def rank(self, T):
        return self.vertex(T).ngens

    @property
    def is_free(self):
        return all(v.is_free_presentation() for v in self.vertices.values())

    def is_zero(self):
        return all(v.is_zero() for v in self.vertices.values())

    def validate(self):
        R = self.ring
        for (T, k), M in self.boundaries.items():
            src, dst = self.vertices[T], self.vertices[T - {k}]
            if src.relations.shape[1] and not dst.contains_matrix(mx.mul(R, M, src.relations)):
                raise ValueError(f"boundary d^{k} at {self.ordered(T)} is not well defined")
        for T in self.subsets():
            for k, l in itertools.combinations(self.ordered(T), 2):
                a = mx.mul(R, self.d(T - {k}, l), self.d(T, k))
                b = mx.mul(R, self.d(T - {l}, k), self.d(T, l))
                if not self.vertices[T - {k, l}].contains_matrix(mx.sub(a, b)):
                    raise ValueError(f"square for directions {k}, {l} at {self.ordered(T)} does not commute")

    @classmethod
    def zero(cls, ring, directions):
        return cls(ring, directions, {}, {}, check=False)

    @classmethod
    def free(cls, ring, directions, ranks, boundaries, check=True):
        return cls(ring, directions, {frozenset(T): int(r) for T, r in ranks.items()},
                   {(frozenset(T), k): M for (T, k), M in boundaries.items()}, check)

    def __eq__(self, other):
        if not isinstance(other, Cube):
            return NotImplemented
        if self.ring != other.ring or self.directions != other.directions:
            return False
        for T in self.subsets():
            a, b = self.vertices[T], other.vertices[T]
            if a.ngens != b.ngens or not mx.equal(a.relations, b.relations):
                return False
        return all(mx.equal(M, other.boundaries[key]) for key, M in self.boundaries.items())

    __hash__ = None

    def __repr__(self):
        ranks = ", ".join(f"{''.join(map(str, self.ordered(T))) or '∅'}:{self.rank(T)}" for T in self.subsets())
        return f"Cube({self.ring!r}, {list(self.directions)}, [{ranks}])"


@dataclass
class CubeMap:
    """Natural transformation given by per-vertex matrices."""

    domain: Cube
    codomain: Cube
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.domain.directions != self.codomain.directions:
            raise ValueError("cube maps need equal direction lists")
        R = self.domain.ring
        full = {}
        for T in self.domain.subsets():
            M = self.maps.get(T)
            if M is None:
                M = mx.zeros(R, self.codomain.rank(T), self.domain.rank(T))
            full[T] = M
        self.maps = full

    def is_natural(self):
        R = self.domain.ring
        x, y = self.domain, self.codomain
        for T in x.subsets():
            if x.vertices[T].relations.shape[1]:
                if not y.vertices[T].contains_matrix(mx.mul(R, self.maps[T], x.vertices[T].relations)):
                    return False
            for k in T:
                a = mx.mul(R, y.d(T, k), self.maps[T])
                b = mx.mul(R, self.maps[T - {k}], x.d(T, k))
                if not y.vertices[T - {k}].contains_matrix(mx.sub(a, b)):
                    return False
        return True

    def compose(self, other):
        R = self.domain.ring
        return CubeMap(other.domain, self.codomain,
                       {T: mx.mul(R, self.maps[T], other.maps[T]) for T in other.domain.subsets()})

    @classmethod
    def identity(cls, x):
        return cls(x, x, {T: mx.identity(x.ring, x.rank(T)) for T in x.subsets()})

    def vertex_map(self, T):
        T = frozenset(T)
        return FpMap(self.domain.vertices[T], self.codomain.vertices[T], self.maps[T], check=False)


# ---------------------------------------------------------------------------


def is_monic(x):
    """Every boundary map is injective."""
    for (T, k) in x.boundaries:
        if x.vertices[T].ngens and not x.boundary_map(T, k).is_injective():
            return False
    return True


def h0_direction(x, k):
    """The cube ``H₀^k(x)`` on ``S - {k}``: vertices ``coker d^k_{T ∪ {k}}``."""
    if k not in x.directions:
        raise KeyError(f"{k!r} is not a direction of the cube")
    rest = [s for s in x.directions if s != k]
    R = x.ring
    verts = {}
    for T in subsets(rest):
        v = x.vertices[T]
        rel = mx.hstack(R, [v.relations, x.d(T | {k}, k)], v.ngens)
        verts[T] = PresentedModule(R, v.ngens, rel)
    bnd = {(T, l): x.d(T, l) for T in subsets(rest) for l in T}
    return Cube(R, rest, verts, bnd, check=False)


def h0_iterated(x, T=None, check=True):
    """``H₀^T(x)`` taken in the stored direction order; ``T`` defaults to ``S``."""
    T = x.directions if T is None else [k for k in x.directions if k in set(T)]
    if check and not is_admissible(x):
        raise NotAdmissible("iterated H₀ needs an admissible cube")
    for k in T:
        x = h0_direction(x, k)
    return x


def _quotient_cube(x, T):
    """``H₀^T(x)`` built in one step: each vertex modulo the sum of images."""
    R = x.ring
    rest = [s for s in x.directions if s not in T]
    verts = {}
    for U in subsets(rest):
        v = x.vertices[U]
        rel = mx.hstack(R, [v.relations] + [x.d(U | {k}, k) for k in x.directions if k in T], v.ngens)
        verts[U] = PresentedModule(R, v.ngens, rel)
    bnd = {(U, l): x.d(U, l) for U in subsets(rest) for l in U}
    return Cube(R, rest, verts, bnd, check=False)


def is_admissible(x):
    """Monic, and every ``H₀^k(x)`` admissible.

    Iterated cokernels only depend on the set of directions removed, so the
    recursion is evaluated once per subset.
    """
    memo = {}

    def ok(T):
        if T not in memo:
            y = x if not T else _quotient_cube(x, T)
            memo[T] = is_monic(y) and all(ok(T | {k}) for k in x.directions if k not in T)
        return memo[T]

    return ok(frozenset())


def _tot_layout(x):
    layout = {}
    for T in x.subsets():
        layout.setdefault(len(T), []).append(T)
    offsets = {}
    for n, Ts in layout.items():
        o = 0
        for T in Ts:
            offsets[T] = o
            o += x.rank(T)
    return layout, offsets


def totalize(x):
    """``Tot(x)``: degree ``n`` is ``⊕_{#T=n} x_T`` with Koszul signs."""
    if not x.is_free:
        raise ValueError("totalization needs free vertices")
    R = x.ring
    layout, offsets = _tot_layout(x)
    ranks = {n: sum(x.rank(T) for T in Ts) for n, Ts in layout.items()}
    diffs = {}
    for n in range(1, len(x.directions) + 1):
        D = mx.zeros(R, ranks[n - 1], ranks[n])
        for T in layout[n]:
            c0 = offsets[T]
            for j, k in enumerate(x.ordered(T)):
                U = T - {k}
                M = x.d(T, k)
                r0 = offsets[U]
                if j % 2:
                    M = mx.neg(M)
                D[r0:r0 + M.shape[0], c0:c0 + M.shape[1]] = M
        diffs[n] = D
    return ChainComplex(R, ranks, diffs, check=False)


def totalize_map(f):
    R = f.domain.ring
    X, Y = totalize(f.domain), totalize(f.codomain)
    _, ox = _tot_layout(f.domain)
    _, oy = _tot_layout(f.codomain)
    comps = {}
    for n in range(len(f.domain.directions) + 1):
        comps[n] = mx.zeros(R, Y.rank(n), X.rank(n))
    for T in f.domain.subsets():
        M = f.maps[T]
        comps[len(T)][oy[T]:oy[T] + M.shape[0], ox[T]:ox[T] + M.shape[1]] = M
    return ChainMap(X, Y, comps, check=False)


@dataclass
class TotisomReport:
    higher_vanish: bool
    failing_degrees: list
    h0_iso: bool
    tot: ChainComplex
    h0_tot: PresentedModule
    h0_cube: PresentedModule

    @property
    def passed(self):
        return self.higher_vanish and self.h0_iso


def verify_totisom(x, check_admissible=True):
    """Check ``H_p(Tot x) = 0`` for ``p ≠ 0`` and ``H₀(Tot x) ≅ H₀^S(x)_∅``.

    The isomorphism is the identity on the generators of ``x_∅``: both sides
    are quotients of ``x_∅`` through the maps ``π^k``.
    """
    if check_admissible and not is_admissible(x):
        raise NotAdmissible("cube is not admissible")
    R = x.ring
    tot = totalize(x)
    bad = [n for n in range(1, len(x.directions) + 1) if not exact_at(tot, n)]
    empty = frozenset()
    h0_tot = PresentedModule(R, tot.rank(0), tot.d(1))
    h0_cube = _quotient_cube(x, frozenset(x.directions)).vertices[empty]
    iso = False
    n = x.rank(empty)
    ident = mx.identity(R, n)
    phi = FpMap(h0_tot, h0_cube, ident, check=False)
    if phi.is_well_defined() and FpMap(h0_cube, h0_tot, ident, check=False).is_well_defined():
        iso = is_isomorphism(phi)
    return TotisomReport(not bad, bad, iso, tot, h0_tot, h0_cube)
