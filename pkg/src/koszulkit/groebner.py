"""Buchberger completion for ideals and submodules of free modules.

Internally a vector of ``A^m`` is a dict ``{(monomial_key, position): coeff}``
with monomial keys in the ring's order encoding; term-over-position order is
plain tuple comparison on the dict keys.
"""

from __future__ import annotations

import heapq
import itertools
from collections import OrderedDict
from functools import cached_property

from .rings import Polynomial, PolynomialRing, RingError

__all__ = [
    "groebner_basis",
    "normal_form",
    "Ideal",
    "ideal_membership",
    "radical_membership",
    "colon_ideal",
    "is_regular_sequence",
    "SubmoduleGB",
    "col_to_vec",
    "vec_to_col",
]


def _add(a, b):
    return tuple(map(int.__add__, a, b))


def _sub(a, b):
    return tuple(map(int.__sub__, a, b))


class _Elem:
    __slots__ = ("vec", "lm", "pos", "cof")

    def __init__(self, vec, lm, pos, cof):
        self.vec = vec
        self.lm = lm
        self.pos = pos
        self.cof = cof


def _axpy(target, c, shift, src):
    """target -= c * x^shift * src, in place."""
    for (m, p), v in src.items():
        k = (_add(m, shift), p)
        w = target.get(k)
        if w is None:
            target[k] = -(c * v)
        else:
            w = w - c * v
            if w:
                target[k] = w
            else:
                del target[k]


def _scale(vec, c):
    return {k: v * c for k, v in vec.items()}


def _reduce(vec, by_pos, divides, cof=None):
    """Full normal form of ``vec``; ``cof`` (if given) is updated alongside."""
    p = dict(vec)
    r = {}
    while p:
        t = max(p)
        m, pos = t
        for g in by_pos.get(pos, ()):
            if divides(g.lm, m):
                c = p[t]
                shift = _sub(m, g.lm)
                _axpy(p, c, shift, g.vec)
                if cof is not None:
                    _axpy(cof, c, shift, g.cof)
                break
        else:
            r[t] = p.pop(t)
    return r, cof


class _GB:
    """Result of a completion run: reduced basis plus optional syzygies."""

    def __init__(self, basis, syzygies, order):
        self.basis = basis
        self.syzygies = syzygies
        self.order = order
        self.by_pos = {}
        for g in basis:
            self.by_pos.setdefault(g.pos, []).append(g)

    def reduce(self, vec, cof=None):
        return _reduce(vec, self.by_pos, self.order.divides, cof)


def _buchberger(vecs, order, track=False, want_syz=False, rank1=False):
    divides, lcm = order.divides, order.lcm
    one = order.one
    basis = []
    by_pos = {}
    pairs = []
    done = set()
    syz = []

    def push(vec, cof):
        t = max(vec)
        c = vec[t]
        if c != 1:
            inv = 1 / c
            if isinstance(inv, float):
                raise TypeError("inexact coefficient in Groebner input")
            vec = _scale(vec, inv)
            if cof is not None:
                cof = _scale(cof, inv)
        e = _Elem(vec, t[0], t[1], cof)
        idx = len(basis)
        for j, g in enumerate(basis):
            if g.pos == e.pos:
                heapq.heappush(pairs, (lcm(g.lm, e.lm), e.pos, j, idx))
        basis.append(e)
        by_pos.setdefault(e.pos, []).append(e)

    # cofactors must live in the coefficient field, not in int
    unit = next((c * 0 + 1 for v in vecs for c in v.values()), 1)
    for i, v in enumerate(vecs):
        cof = {(one, i): unit} if track else None
        if not v:
            if want_syz:
                syz.append(cof)
            continue
        r, cof = _reduce(v, by_pos, divides, cof)
        if r:
            push(r, cof)
        elif want_syz:
            syz.append(cof)

    while pairs:
        L, pos, i, j = heapq.heappop(pairs)
        gi, gj = basis[i], basis[j]
        if rank1 and not want_syz and order.coprime(gi.lm, gj.lm):
            done.add((i, j))
            continue
        skip = False
        for k, gk in enumerate(basis):
            if k == i or k == j or gk.pos != pos or not divides(gk.lm, L):
                continue
            if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
                skip = True
                break
        done.add((i, j))
        if skip:
            continue
        si = _sub(L, gi.lm)
        sj = _sub(L, gj.lm)
        s = {}
        _axpy(s, -1, si, gi.vec)
        _axpy(s, 1, sj, gj.vec)
        cof = None
        if track:
            cof = {}
            _axpy(cof, -1, si, gi.cof)
            _axpy(cof, 1, sj, gj.cof)
        r, cof = _reduce(s, by_pos, divides, cof)
        if r:
            push(r, cof)
        elif want_syz and cof:
            syz.append(cof)

    # minimalize and interreduce
    keep = []
    for idx, g in enumerate(basis):
        redundant = False
        for jdx, h in enumerate(basis):
            if jdx == idx or h.pos != g.pos or not divides(h.lm, g.lm):
                continue
            if h.lm != g.lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append(g)
    reduced = []
    for g in keep:
        others = {}
        for h in keep:
            if h is not g:
                others.setdefault(h.pos, []).append(h)
        lead = (g.lm, g.pos)
        tail = dict(g.vec)
        del tail[lead]
        cof = dict(g.cof) if g.cof is not None else None
        r, cof = _reduce(tail, others, divides, cof)
        r[lead] = g.vec[lead]
        reduced.append(_Elem(r, g.lm, g.pos, cof))
    reduced.sort(key=lambda e: (e.lm, e.pos))
    return _GB(reduced, syz if want_syz else None, order)


_CACHE = OrderedDict()
_CACHE_SIZE = 4096


def _completion(vecs, order, track=False, want_syz=False, rank1=False):
    key = (order.name, order.nvars, track, want_syz, rank1,
           tuple(frozenset(v.items()) for v in vecs))
    hit = _CACHE.get(key)
    if hit is not None:
        _CACHE.move_to_end(key)
        return hit
    res = _buchberger(vecs, order, track, want_syz, rank1)
    _CACHE[key] = res
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return res


# ---------------------------------------------------------------------------
# conversions


def col_to_vec(col):
    """Sequence of polynomials -> internal vector."""
    vec = {}
    for i, p in enumerate(col):
        if isinstance(p, Polynomial):
            for k, c in p._t.items():
                vec[(k, i)] = c
        elif p:
            raise RingError("expected polynomial entries")
    return vec


def poly_to_vec(p):
    return {(k, 0): c for k, c in p._t.items()}


def vec_to_col(vec, ring, m):
    parts = [dict() for _ in range(m)]
    conv = ring.base.convert
    for (k, i), c in vec.items():
        parts[i][k] = conv(c)
    return [Polynomial(ring, t) for t in parts]


# ---------------------------------------------------------------------------
# ideals


def _check_ring(polys, ring=None):
    for f in polys:
        if not isinstance(f, Polynomial):
            raise RingError(f"{f!r} is not a polynomial")
        if ring is None:
            ring = f.ring
        elif f.ring != ring:
            raise RingError(f"mixed rings: {ring!r} and {f.ring!r}")
    if ring is not None and not isinstance(ring, PolynomialRing):
        raise RingError("Groebner bases need a polynomial ring over a field")
    return ring


def groebner_basis(gens):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Elements are monic and sorted by increasing leading monomial.
    """
    gens = list(gens)
    if not gens:
        return []
    ring = _check_ring(gens)
    gb = _completion([poly_to_vec(f) for f in gens if f], ring.order, rank1=True)
    return [Polynomial(ring, {k: c for (k, _), c in g.vec.items()}) for g in gb.basis]


def normal_form(f, basis):
    """Normal form of ``f`` modulo a Groebner basis (list of polynomials)."""
    ring = _check_ring([f] + list(basis))
    elems = []
    for g in basis:
        if not g:
            continue
        g = g.monic()
        lm = max(g._t)
        elems.append(_Elem(poly_to_vec(g), lm, 0, None))
    r, _ = _reduce(poly_to_vec(f), {0: elems}, ring.order.divides)
    return Polynomial(ring, {k: c for (k, _), c in r.items()})


class Ideal:
    """Ideal of a polynomial ring; the reduced Groebner basis is computed lazily."""

    def __init__(self, ring, generators):
        generators = [ring.convert(g) for g in generators]
        _check_ring(generators, ring)
        self.ring = ring
        self.generators = tuple(generators)

    @cached_property
    def _gb(self):
        return _completion([poly_to_vec(f) for f in self.generators if f], self.ring.order, rank1=True)

    @property
    def groebner(self):
        return [Polynomial(self.ring, {k: c for (k, _), c in g.vec.items()}) for g in self._gb.basis]

    def reduce(self, f):
        f = self.ring.convert(f)
        r, _ = self._gb.reduce(poly_to_vec(f))
        return Polynomial(self.ring, {k: c for (k, _), c in r.items()})

    def contains(self, f):
        f = self._coerce(f)
        return not self._gb.reduce(poly_to_vec(f))[0]

    __contains__ = contains

    def _coerce(self, f):
        if isinstance(f, Polynomial) and f.ring != self.ring:
            raise RingError(f"ring mismatch: {f.ring!r} vs {self.ring!r}")
        return self.ring.convert(f)

    def is_proper(self):
        return not self.contains(self.ring.one)

    def is_subset(self, other):
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner == other.groebner

    __hash__ = None

    def __add__(self, other):
        return Ideal(self.ring, self.generators + tuple(other.generators))

    def colon(self, f):
        return colon_ideal(self, f)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators))})"


def _as_ideal(I, f=None):
    if isinstance(I, Ideal):
        if f is not None and isinstance(f, Polynomial) and f.ring != I.ring:
            raise RingError(f"ring mismatch: {f.ring!r} vs {I.ring!r}")
        return I
    gens = list(I)
    ring = _check_ring(gens + ([f] if isinstance(f, Polynomial) else []))
    if ring is None:
        raise RingError("cannot infer the ring of an empty generator list")
    return Ideal(ring, gens)


def ideal_membership(f, I):
    """True iff ``f`` lies in the ideal ``I`` (an :class:`Ideal` or generator list)."""
    I = _as_ideal(I, f)
    return I.contains(f)


def radical_membership(f, I):
    """True iff some power of ``f`` lies in ``I``: tests 1 in I + (1 - t*f)."""
    I = _as_ideal(I, f)
    f = I._coerce(f)
    name = "_t"
    while name in I.ring.names:
        name += "_"
    R, embed = I.ring.extend([name])
    t = R.gens[-1]
    J = Ideal(R, [embed(g) for g in I.generators] + [1 - t * embed(f)])
    return not J.is_proper()


def colon_ideal(I, f):
    """The ideal (I : f) = {a : a*f in I}."""
    I = _as_ideal(I, f)
    f = I._coerce(f)
    ring = I.ring
    if not f:
        return Ideal(ring, [ring.one])
    gens = [g for g in I.generators if g]
    vecs = [poly_to_vec(f)] + [poly_to_vec(g) for g in gens]
    gb = _completion(vecs, ring.order, track=True, want_syz=True, rank1=True)
    out = []
    for s in gb.syzygies:
        a = {k: ring.base.convert(c) for (k, i), c in s.items() if i == 0}
        if a:
            out.append(Polynomial(ring, a))
    if not out:
        out = [ring.zero]
    return Ideal(ring, out)


def is_regular_sequence(fs):
    """True iff ``fs`` is a regular sequence in every order and (fs) is proper.

    Each element must be a nonzerodivisor modulo the ideal of its
    predecessors, decided by the colon test (J : f) == J.  All
    permutations are tested, so inputs are capped at four elements.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("empty sequence")
    if len(fs) > 4:
        raise ValueError("sequences longer than 4 are not supported")
    ring = _check_ring(fs)
    if not Ideal(ring, fs).is_proper():
        return False
    seen = {}
    for perm in itertools.permutations(range(len(fs))):
        for i in range(len(fs)):
            key = (frozenset(perm[:i]), perm[i])
            if key not in seen:
                J = Ideal(ring, [fs[j] for j in perm[:i]] or [ring.zero])
                seen[key] = colon_ideal(J, fs[perm[i]]).is_subset(J)
            if not seen[key]:
                return False
    return True


# ---------------------------------------------------------------------------
# submodules


class SubmoduleGB:
    """Submodule of ``A^rank`` generated by ``gens`` (internal vectors)."""

    def __init__(self, ring, rank, gens):
        self.ring = ring
        self.rank = rank
        self.gens = [g for g in gens]

    @cached_property
    def _gb(self):
        return _completion([g for g in self.gens if g], self.ring.order)

    @cached_property
    def _tracked(self):
        return _completion(list(self.gens), self.ring.order, track=True, want_syz=True)

    def reduce(self, vec):
        return self._gb.reduce(vec)[0]

    def contains(self, vec):
        return not self._gb.reduce(vec)[0]

    def is_everything(self):
        one = self.ring.order.one
        return all(self.contains({(one, i): self.ring.base.one}) for i in range(self.rank))

    def lift(self, vec):
        """Coefficients ``a`` (dict vector over generator indices) with sum a_i g_i = vec, or None."""
        gb = self._tracked
        r, cof = gb.reduce(vec, {})
        if r:
            return None
        return {k: -c for k, c in cof.items()}

    def syzygies(self):
        """Generators of the module of relations among ``gens`` (vectors over generator indices)."""
        return [s for s in self._tracked.syzygies if s]

    def basis_size(self):
        return len(self._gb.basis)
