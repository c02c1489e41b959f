"""Complexes of complexes and zig-zag certificates.

A :class:`DoubleComplex` has inner complexes ``X_n`` (outer degree ``n``)
and outer differentials ``d_n : X_n -> X_{n-1}`` that are chain maps.  Two
cone constructions exist: ``A`` takes cones levelwise, ``B`` takes the cone
in the outer direction.  The weak equivalences of entries are the inner
quasi-isomorphisms.

Sign convention for :func:`tot_outer`: the block coming from outer degree
``n`` has both its inner and its outer differential multiplied by
``(-1)^n``, and blocks are listed by decreasing ``n``.  With this choice
``tot_outer([x -f-> y]) == cone(f)`` on the nose.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import matrix as mx
from .complexes import (
    ChainComplex,
    ChainMap,
    PreconditionError,
    cone,
    cone_functorial,
    cone_inclusion,
    direct_sum,
    homology,
    iota,
    is_acyclic,
    is_quasi_iso,
    shift,
)
from .rings import ZZ

__all__ = [
    "DoubleComplex",
    "DoubleMap",
    "Step",
    "ZigzagCertificate",
    "CertificateError",
    "tot_outer",
    "tot_map",
    "cone_A",
    "cone_B",
    "verify_step",
    "zigzag_to_tot",
    "solid_witness",
    "cone_compare",
    "random_double_complex",
    "random_double_map",
    "random_lw_map",
]


class CertificateError(ValueError):
    """A constructed certificate failed verification."""


def _zero(R):
    return ChainComplex(R, {})


class DoubleComplex:
    """Bounded complex (outer grading) of bounded free complexes."""

    def __init__(self, ring, entries, outer=None, check=True):
        self.ring = ring
        self._x = {n: c for n, c in entries.items() if not c.is_zero()}
        self._d = {}
        for n, f in (outer or {}).items():
            if n in self._x and (n - 1) in self._x:
                if f.domain != self._x[n] or f.codomain != self._x[n - 1]:
                    raise ValueError(f"outer differential d_{n} has the wrong endpoints")
                self._d[n] = f
        if check:
            self.validate()

    @property
    def support(self):
        if not self._x:
            return (0, -1)
        return (min(self._x), max(self._x))

    def degrees(self):
        lo, hi = self.support
        return range(lo, hi + 1)

    @property
    def length(self):
        lo, hi = self.support
        return max(hi - lo, 0)

    def entry(self, n):
        return self._x.get(n) or _zero(self.ring)

    def d(self, n):
        f = self._d.get(n)
        if f is None:
            return ChainMap.zero(self.entry(n), self.entry(n - 1))
        return f

    def is_zero(self):
        return not self._x

    def inner_support(self):
        lows = [c.support[0] for c in self._x.values()]
        highs = [c.support[1] for c in self._x.values()]
        return (min(lows), max(highs)) if lows else (0, -1)

    def validate(self):
        for n, f in self._d.items():
            if not f.commutes():
                raise ValueError(f"outer differential d_{n} is not a chain map")
            g = self._d.get(n - 1)
            if g is not None and not g.compose(f).is_zero():
                raise ValueError(f"outer d_{n - 1} d_{n} is not zero")
        for c in self._x.values():
            if not c.is_complex():
                raise ValueError("an entry is not a complex")

    def row(self, i):
        """The outer complex of free modules in inner degree ``i``."""
        ranks = {n: self.entry(n).rank(i) for n in self.degrees()}
        diffs = {n: self.d(n).component(i) for n in self.degrees()}
        return ChainComplex(self.ring, ranks, diffs, check=False)

    def is_row_exact(self):
        lo, hi = self.inner_support()
        return all(is_acyclic(self.row(i)) for i in range(lo, hi + 1))

    def is_levelwise_acyclic(self):
        return all(is_acyclic(c) for c in self._x.values())

    @classmethod
    def concentrated(cls, z, degree=0):
        """``j(z)`` placed in outer degree ``degree``."""
        return cls(z.ring, {degree: z}, {}, check=False)

    @classmethod
    def zero(cls, ring):
        return cls(ring, {}, {}, check=False)

    def __eq__(self, other):
        if not isinstance(other, DoubleComplex):
            return NotImplemented
        if self.ring != other.ring or set(self._x) != set(other._x):
            return False
        if any(self._x[n] != other._x[n] for n in self._x):
            return False
        return all(self.d(n) == other.d(n) for n in self.degrees())

    __hash__ = None

    def __repr__(self):
        parts = ", ".join(f"{n}:{self.entry(n)!r}" for n in self.degrees())
        return f"DoubleComplex([{parts}])"


class DoubleMap:
    """Morphism of double complexes: one inner chain map per outer degree."""

    def __init__(self, domain, codomain, comps=None, check=True):
        self.domain = domain
        self.codomain = codomain
        self.ring = domain.ring
        self._f = {}
        for n, f in (comps or {}).items():
            if f.domain.is_zero() or f.codomain.is_zero():
                continue
            if f.domain != domain.entry(n) or f.codomain != codomain.entry(n):
                raise ValueError(f"component {n} has the wrong endpoints")
            self._f[n] = f
        if check and not self.commutes():
            raise ValueError("not a morphism of double complexes")

    def degrees(self):
        lo = min(self.domain.support[0], self.codomain.support[0])
        hi = max(self.domain.support[1], self.codomain.support[1])
        return range(lo, hi + 1)

    def component(self, n):
        f = self._f.get(n)
        if f is None:
            return ChainMap.zero(self.domain.entry(n), self.codomain.entry(n))
        return f

    def commutes(self):
        if not all(f.commutes() for f in self._f.values()):
            return False
        for n in range(self.degrees().start, self.degrees().stop + 1):
            lhs = self.codomain.d(n).compose(self.component(n))
            rhs = self.component(n - 1).compose(self.domain.d(n))
            if not (lhs - rhs).is_zero():
                return False
        return True

    @classmethod
    def identity(cls, X):
        return cls(X, X, {n: ChainMap.identity(X.entry(n)) for n in X.degrees()}, check=False)

    @classmethod
    def zero(cls, X, Y):
        return cls(X, Y, {}, check=False)

    def compose(self, other):
        """``self ∘ other``."""
        comps = {n: self.component(n).compose(other.component(n)) for n in other.domain.degrees()}
        return DoubleMap(other.domain, self.codomain, comps, check=False)

    def __eq__(self, other):
        if not isinstance(other, DoubleMap):
            return NotImplemented
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return all(self.component(n) == other.component(n) for n in self.degrees())

    __hash__ = None

    def __repr__(self):
        return f"DoubleMap({self.domain!r} -> {self.codomain!r})"


# ---------------------------------------------------------------------------
# totalization


def _tot_blocks(X, k):
    """``[(n, rank)]`` of the blocks of ``Tot_k``, by decreasing ``n``."""
    return [(n, X.entry(n).rank(k - n)) for n in reversed(X.degrees())]


def _offsets(blocks):
    out, o = {}, 0
    for n, r in blocks:
        out[n] = o
        o += r
    return out, o


def _tot_range(X):
    lo, hi = X.support
    ilo, ihi = X.inner_support()
    return range(lo + ilo, hi + ihi + 1)


def tot_outer(X):
    """Total complex of a double complex."""
    R = X.ring
    if X.is_zero():
        return _zero(R)
    ranks, diffs = {}, {}
    layout = {}
    for k in _tot_range(X):
        layout[k] = _offsets(_tot_blocks(X, k))
        ranks[k] = layout[k][1]
    for k in _tot_range(X):
        if (k - 1) not in layout:
            continue
        src, _ = layout[k]
        dst, _ = layout[k - 1]
        D = mx.zeros(R, ranks[k - 1], ranks[k])
        for n in X.degrees():
            i = k - n
            r = X.entry(n).rank(i)
            if not r:
                continue
            c0 = src[n]
            sign = -1 if n % 2 else 1
            inner = X.entry(n).d(i)
            if inner.shape[0]:
                r0 = dst[n]
                D[r0:r0 + inner.shape[0], c0:c0 + r] = mx.neg(inner) if sign < 0 else inner
            if n - 1 in dst:
                outer = X.d(n).component(i)
                if outer.shape[0]:
                    r0 = dst[n - 1]
                    D[r0:r0 + outer.shape[0], c0:c0 + r] = mx.neg(outer) if sign < 0 else outer
        diffs[k] = D
    return ChainComplex(R, ranks, diffs, check=False)


def tot_map(F):
    R = F.ring
    X, Y = F.domain, F.codomain
    TX, TY = tot_outer(X), tot_outer(Y)
    comps = {}
    for k in TX.degrees():
        if not TY.rank(k):
            continue
        sx, _ = _offsets(_tot_blocks(X, k))
        sy, _ = _offsets(_tot_blocks(Y, k))
        M = mx.zeros(R, TY.rank(k), TX.rank(k))
        for n in X.degrees():
            if n not in sy:
                continue
            B = F.component(n).component(k - n)
            if B.shape[0] and B.shape[1]:
                M[sy[n]:sy[n] + B.shape[0], sx[n]:sx[n] + B.shape[1]] = B
        comps[k] = M
    return ChainMap(TX, TY, comps, check=False)


# ---------------------------------------------------------------------------
# the two cones


def _sum_map(R, parts_src, parts_dst, blocks):
    """Chain map between direct sums given by a block matrix of chain maps (or None)."""
    src = parts_src[0]
    for p in parts_src[1:]:
        src = direct_sum(src, p)
    dst = parts_dst[0]
    for p in parts_dst[1:]:
        dst = direct_sum(dst, p)
    comps = {}
    lo = min(src.support[0], dst.support[0])
    hi = max(src.support[1], dst.support[1])
    for i in range(lo, hi + 1):
        rows = [[None if b is None else b.component(i) for b in row] for row in blocks]
        comps[i] = mx.block(R, rows, [p.rank(i) for p in parts_dst], [p.rank(i) for p in parts_src])
    return ChainMap(src, dst, comps, check=False)


def cone_B(F):
    """Outer cone: entries ``X_{n-1} ⊕ Y_n``, ``d = [[-d^X, 0], [-F, d^Y]]``."""
    R = F.ring
    X, Y = F.domain, F.codomain
    lo = min(X.support[0] + 1, Y.support[0])
    hi = max(X.support[1] + 1, Y.support[1])
    entries = {n: direct_sum(X.entry(n - 1), Y.entry(n)) for n in range(lo, hi + 1)}
    outer = {}
    for n in range(lo + 1, hi + 1):
        outer[n] = _sum_map(
            R, [X.entry(n - 1), Y.entry(n)], [X.entry(n - 2), Y.entry(n - 1)],
            [[-X.d(n - 1), None], [-F.component(n - 1), Y.d(n)]])
    return DoubleComplex(R, entries, outer, check=False)


def cone_B_functorial(F, G, a, b):
    """``Cone_B F -> Cone_B G`` from a square ``G a = b F``."""
    R = F.ring
    src, dst = cone_B(F), cone_B(G)
    comps = {}
    for n in src.degrees():
        comps[n] = _sum_map(R, [F.domain.entry(n - 1), F.codomain.entry(n)],
                            [G.domain.entry(n - 1), G.codomain.entry(n)],
                            [[a.component(n - 1), None], [None, b.component(n)]])
    return DoubleMap(src, dst, comps, check=False)


def cone_B_inclusion(F):
    """``Y -> Cone_B F``, second summand."""
    R = F.ring
    Y = F.codomain
    tgt = cone_B(F)
    comps = {}
    for n in Y.degrees():
        x = F.domain.entry(n - 1)
        comps[n] = _sum_map(R, [Y.entry(n)], [x, Y.entry(n)],
                            [[ChainMap.zero(Y.entry(n), x)], [ChainMap.identity(Y.entry(n))]])
    return DoubleMap(Y, tgt, comps, check=False)


def cone_A(F):
    """Levelwise cone: entries ``Cone(F_n)``, outer maps induced by the squares."""
    R = F.ring
    X, Y = F.domain, F.codomain
    degs = range(min(X.support[0], Y.support[0]), max(X.support[1], Y.support[1]) + 1)
    entries = {n: cone(F.component(n)) for n in degs}
    outer = {n: cone_functorial(F.component(n), F.component(n - 1), X.d(n), Y.d(n)) for n in degs}
    return DoubleComplex(R, entries, outer, check=False)


def C_A(X):
    return cone_A(DoubleMap.identity(X))


def iota_A(X):
    return DoubleMap(X, C_A(X), {n: iota(X.entry(n)) for n in X.degrees()}, check=False)


def cone_A_inclusion(F):
    Y = F.codomain
    return DoubleMap(Y, cone_A(F), {n: cone_inclusion(F.component(n)) for n in Y.degrees()}, check=False)


def _pushout_map(F):
    """``C_A X -> Cone_A F``, levelwise ``diag(id, F_n)``."""
    X = F.domain
    comps = {}
    for n in X.degrees():
        idn = ChainMap.identity(X.entry(n))
        comps[n] = cone_functorial(idn, F.component(n), idn, F.component(n))
    return DoubleMap(C_A(X), cone_A(F), comps, check=False)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Step:
    """One arrow of a zig-zag between ``left`` and ``right``.

    ``orientation`` is ``"->"`` when ``morphism : left -> right`` and
    ``"<-"`` when ``morphism : right -> left``.
    """

    left: DoubleComplex
    right: DoubleComplex
    morphism: DoubleMap
    orientation: str
    tag: str

    def __post_init__(self):
        if self.orientation not in ("->", "<-"):
            raise ValueError("orientation must be '->' or '<-'")
        if self.tag not in ("qis", "lw"):
            raise ValueError("tag must be 'qis' or 'lw'")


@dataclass
class ZigzagCertificate:
    start: DoubleComplex
    end: DoubleComplex
    steps: list = field(default_factory=list)
    header: dict = field(default_factory=dict)

    def tags(self):
        return [(s.orientation, s.tag) for s in self.steps]

    def failures(self):
        """Indices of failing steps; ``-1`` flags a broken chain of endpoints."""
        bad = []
        prev = self.start
        for i, s in enumerate(self.steps):
            if s.left != prev:
                bad.append(-1)
            if not verify_step(s):
                bad.append(i)
            prev = s.right
        if prev != self.end:
            bad.append(-1)
        return sorted(set(bad))

    def verify(self):
        return not self.failures()

    def then(self, other):
        """Concatenation; the endpoints must agree."""
        if self.end != other.start:
            raise ValueError("certificates do not compose: endpoints differ")
        return ZigzagCertificate(self.start, other.end, self.steps + other.steps,
                                 {**self.header, **other.header})


def _endpoints_ok(step):
    F = step.morphism
    if step.orientation == "->":
        return F.domain == step.left and F.codomain == step.right
    return F.domain == step.right and F.codomain == step.left


def verify_step(step):
    """Check a single arrow.

    ``lw``: every component is an inner quasi-isomorphism.  ``qis``: the
    outer cone is row exact, and the total map is a quasi-isomorphism.
    """
    if not _endpoints_ok(step):
        return False
    F = step.morphism
    if not F.commutes():
        return False
    if step.tag == "lw":
        return all(is_quasi_iso(F.component(n)) for n in F.degrees())
    return cone_B(F).is_row_exact() and is_quasi_iso(tot_map(F))


def _checked(cert):
    bad = cert.failures()
    if bad:
        raise CertificateError(f"certificate step(s) {bad} failed verification")
    return cert


# ---------------------------------------------------------------------------
# the zig-zag algorithm


def _peel_top(X):
    """One round of the induction: absorb the top entry into a cone."""
    R = X.ring
    lo, n = X.support
    xn = X.entry(n)
    dn = X.d(n)
    K = cone(dn)
    idn = ChainMap.identity(xn)
    top = cone_functorial(idn, dn, idn, dn)  # C(x_n) -> Cone d_n
    below = X.entry(n - 2)
    down = ChainMap(K, below, {
        i: mx.hstack(R, [mx.zeros(R, below.rank(i), xn.rank(i - 1)), X.d(n - 1).component(i)], below.rank(i))
        for i in K.degrees()}, check=False)

    def assemble(with_top):
        entries = {m: X.entry(m) for m in X.degrees() if m < n - 1}
        entries[n - 1] = K
        outer = {m: X.d(m) for m in X.degrees() if m < n - 1}
        outer[n - 1] = down
        if with_top:
            entries[n] = C_top
            outer[n] = top
        return DoubleComplex(R, entries, outer, check=False)

    C_top = top.domain
    mid = assemble(True)
    right = assemble(False)
    left_comps = {m: ChainMap.identity(X.entry(m)) for m in X.degrees() if m < n - 1}
    left_comps[n - 1] = cone_inclusion(dn)
    left_comps[n] = iota(xn)
    L = DoubleMap(X, mid, left_comps, check=False)
    right_comps = {m: ChainMap.identity(right.entry(m)) for m in right.degrees()}
    Rm = DoubleMap(right, mid, right_comps, check=False)
    return [Step(X, mid, L, "->", "qis"), Step(mid, right, Rm, "<-", "lw")], right


def zigzag_to_tot(X, verify=True):
    """Zig-zag from ``X`` to ``j(shift(tot_outer X, m))`` placed in outer degree ``m``.

    ``m`` is the lowest outer degree of ``X``; it is recorded in the header
    as ``outer_degree`` and ``shift``.
    """
    steps = []
    cur = X
    while cur.length > 0:
        new, cur = _peel_top(cur)
        steps.extend(new)
    m = X.support[0] if not X.is_zero() else 0
    target = DoubleComplex.concentrated(shift(tot_outer(X), m), m) if not X.is_zero() else X
    header = {"outer_degree": m, "shift": m, "steps": len(steps)}
    cert = ZigzagCertificate(X, cur, steps, header)
    if cur != target:
        raise CertificateError("zig-zag endpoint differs from the shifted total complex")
    return _checked(cert) if verify else cert


def is_lw(F):
    return all(is_quasi_iso(F.component(n)) for n in F.degrees())


def solid_witness(F, verify=True):
    """Quasi-isomorphism chain from ``Cone_B F`` to a levelwise acyclic object.

    Needs ``F`` levelwise an inner quasi-isomorphism.  The arrow is the
    push-out comparison ``[X -> Y] -> [C_A X -> Cone_A F]`` after
    totalizing in the outer direction.  When the result is also row exact a
    final arrow to the zero object is appended.
    """
    if not is_lw(F):
        raise PreconditionError("the morphism is not levelwise a quasi-isomorphism")
    X = F.domain
    g = _pushout_map(F)
    step = Step(cone_B(F), cone_B(g), cone_B_functorial(F, g, iota_A(X), cone_A_inclusion(F)), "->", "qis")
    end = step.right
    steps = [step]
    if not end.is_levelwise_acyclic():
        raise CertificateError("push-out object has a non-acyclic entry")
    if end.is_row_exact() and not end.is_zero():
        Z = DoubleComplex.zero(F.ring)
        steps.append(Step(end, Z, DoubleMap.zero(end, Z), "->", "qis"))
        end = Z
    cert = ZigzagCertificate(step.left, end, steps, {"levelwise_acyclic_end": True})
    return _checked(cert) if verify else cert


def cone_compare(F, verify=True):
    """``Cone_B F -> Tot[C_A X -> Cone_A F] <- Cone_A F`` with tags (qis, lw)."""
    X = F.domain
    g = _pushout_map(F)
    mid = cone_B(g)
    first = Step(cone_B(F), mid, cone_B_functorial(F, g, iota_A(X), cone_A_inclusion(F)), "->", "qis")
    second = Step(mid, cone_A(F), cone_B_inclusion(g), "<-", "lw")
    cert = ZigzagCertificate(first.left, second.right, [first, second], {})
    if verify:
        _checked(cert)
        if not (is_quasi_iso(tot_map(first.morphism)) and is_quasi_iso(tot_map(second.morphism))):
            raise CertificateError("total homologies of the two cones differ")
    return cert


def total_homology_table(X):
    """``{k: H_k(tot_outer X)}`` over the total support."""
    T = tot_outer(X)
    return {k: homology(T, k) for k in T.degrees()}


# ---------------------------------------------------------------------------
# random generators (ZZ by default)


def _unimodular(R, n, rng, steps=3):
    g = mx.identity(R, n)
    gi = mx.identity(R, n)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = R.convert(rng.randint(-2, 2))
        E = mx.identity(R, n)
        E[i, j] = c
        Ei = mx.identity(R, n)
        Ei[i, j] = -c
        g = mx.mul(R, E, g)
        gi = mx.mul(R, gi, Ei)
    if n and rng.random() < 0.5:
        k = rng.randrange(n)
        S = mx.identity(R, n)
        S[k, k] = -R.one
        g = mx.mul(R, S, g)
        gi = mx.mul(R, gi, S)
    return g, gi


def _pieces(R, rng, outer_len, inner_len, max_rank):
    """Direct sum of elementary squares and edges; returns ranks and matrices."""
    ranks = {}
    inner = {}   # (n, i) -> matrix X_{n,i} -> X_{n,i-1}
    outerm = {}  # (n, i) -> matrix X_{n,i} -> X_{n-1,i}
    blocks = []
    o0 = rng.randint(-1, 1)
    i0 = rng.randint(-1, 1)
    cells = [(n, i) for n in range(o0, o0 + outer_len + 1) for i in range(i0, i0 + inner_len + 1)]
    for _ in range(rng.randint(2, 7)):
        kind = rng.choice(("point", "inner", "outer", "outer", "square", "square"))
        n, i = rng.choice(cells)
        if kind == "point":
            shape = {(n, i): None}
        elif kind == "inner":
            shape = {(n, i): None, (n, i - 1): None}
        elif kind == "outer":
            shape = {(n, i): None, (n - 1, i): None}
        else:
            shape = {(n, i): None, (n, i - 1): None, (n - 1, i): None, (n - 1, i - 1): None}
        if any(c not in cells for c in shape):
            continue
        if any(ranks.get(c, 0) + 1 > max_rank for c in shape):
            continue
        pos = {}
        for c in shape:
            pos[c] = ranks.get(c, 0)
            ranks[c] = pos[c] + 1
        p, q, r, s = (rng.choice((1, 1, 2, -1, 3, 0)) for _ in range(4))
        # a square with ca = db commutes: a = pr, b = ps, c = qs, d = qr
        if kind == "inner":
            blocks.append(("in", (n, i), pos, R.convert(p or 1)))
        elif kind == "outer":
            blocks.append(("out", (n, i), pos, R.convert(p or 1)))
        elif kind == "square":
            blocks.append(("sq", (n, i), pos, tuple(R.convert(v) for v in (p * r, p * s, q * s, q * r))))
        else:
            blocks.append(("pt", (n, i), pos, None))
    for kind, (n, i), pos, val in blocks:
        def put(store, src, dst, v):
            M = store.setdefault(src, {})
            M[(pos[dst], pos[src])] = v
        if kind == "in":
            put(inner, (n, i), (n, i - 1), val)
        elif kind == "out":
            put(outerm, (n, i), (n - 1, i), val)
        elif kind == "sq":
            a, b, c, d = val
            put(outerm, (n, i), (n - 1, i), a)
            put(inner, (n, i), (n, i - 1), b)
            put(inner, (n - 1, i), (n - 1, i - 1), c)
            put(outerm, (n, i - 1), (n - 1, i - 1), d)
    return ranks, inner, outerm


def _assemble(R, ranks, inner, outerm, twist=None):
    def mat(store, src, dst):
        M = mx.zeros(R, ranks.get(dst, 0), ranks.get(src, 0))
        for (r, c), v in store.get(src, {}).items():
            M[r, c] = v
        if twist:
            M = mx.mul(R, mx.mul(R, twist[dst][0], M), twist[src][1]) if M.size else M
        return M

    outer_degs = sorted({n for n, _ in ranks})
    entries = {}
    for n in outer_degs:
        rk = {i: r for (m, i), r in ranks.items() if m == n}
        entries[n] = ChainComplex(R, rk, {i: mat(inner, (n, i), (n, i - 1)) for i in rk}, check=False)
    outer = {}
    for n in outer_degs:
        if n - 1 not in entries:
            continue
        comps = {i: mat(outerm, (n, i), (n - 1, i)) for (m, i) in ranks if m == n}
        outer[n] = ChainMap(entries[n], entries[n - 1], comps, check=False)
    return DoubleComplex(R, entries, outer, check=True)


def random_double_complex(seed, ring=ZZ, outer_len=3, inner_len=2, max_rank=2):
    """Deterministic random double complex (twisted sum of elementary pieces)."""
    rng = random.Random(seed)
    R = ring
    ol = rng.randint(1, outer_len) if outer_len > 0 else 0
    il = rng.randint(0, inner_len)
    ranks, inner, outerm = _pieces(R, rng, ol, il, max_rank)
    twist = {c: _unimodular(R, r, rng) for c, r in ranks.items()}
    return _assemble(R, ranks, inner, outerm, twist)


def _inner_nullhomotopic(R, x, y, rng):
    """``d k + k d`` for a random ``k : x_i -> y_{i+1}``."""
    k = {}
    for i in x.degrees():
        M = mx.zeros(R, y.rank(i + 1), x.rank(i))
        for a in range(M.shape[0]):
            for b in range(M.shape[1]):
                M[a, b] = R.convert(rng.randint(-2, 2))
        k[i] = M
    zero = lambda i: mx.zeros(R, y.rank(i + 1), x.rank(i))
    comps = {}
    for i in range(min(x.support[0], y.support[0]), max(x.support[1], y.support[1]) + 1):
        comps[i] = mx.add(mx.mul(R, y.d(i + 1), k.get(i, zero(i))),
                          mx.mul(R, k.get(i - 1, zero(i - 1)), x.d(i)))
    return ChainMap(x, y, comps, check=False)


def _outer_nullhomotopic(X, Y, rng):
    """``d h + h d`` with each ``h_n : X_n -> Y_{n+1}`` an inner chain map."""
    R = X.ring
    h = {n: _inner_nullhomotopic(R, X.entry(n), Y.entry(n + 1), rng) for n in X.degrees()}
    hz = lambda n: ChainMap.zero(X.entry(n), Y.entry(n + 1))
    comps = {}
    for n in X.degrees():
        a = Y.d(n + 1).compose(h.get(n, hz(n)))
        b = h.get(n - 1, hz(n - 1)).compose(X.d(n))
        comps[n] = a + b
    return DoubleMap(X, Y, comps, check=False)


def _direct_sum_double(X, Y):
    R = X.ring
    degs = range(min(X.support[0], Y.support[0]), max(X.support[1], Y.support[1]) + 1)
    entries = {n: direct_sum(X.entry(n), Y.entry(n)) for n in degs}
    outer = {n: _sum_map(R, [X.entry(n), Y.entry(n)], [X.entry(n - 1), Y.entry(n - 1)],
                         [[X.d(n), None], [None, Y.d(n)]]) for n in degs}
    return DoubleComplex(R, entries, outer, check=False)


def _into_sum(F, G):
    """``(F, G) : X -> Y ⊕ Z``."""
    R = F.ring
    X = F.domain
    S = _direct_sum_double(F.codomain, G.codomain)
    comps = {n: _sum_map(R, [X.entry(n)], [F.codomain.entry(n), G.codomain.entry(n)],
                         [[F.component(n)], [G.component(n)]]) for n in S.degrees()}
    return DoubleMap(X, S, comps, check=False)


def random_double_map(seed, ring=ZZ, **kw):
    """A random morphism ``X -> Y`` of double complexes.

    ``Y = X' ⊕ Z`` and the map is ``(c·id + N, N')`` with ``N, N'`` outer
    null-homotopies built from inner null-homotopies.
    """
    rng = random.Random(seed)
    X = random_double_complex(rng.randrange(1 << 30), ring, **kw)
    Z = random_double_complex(rng.randrange(1 << 30), ring, **kw)
    c = ring.convert(rng.choice((0, 1, -1, 2, 3)))
    first = DoubleMap(X, X, {n: ChainMap.identity(X.entry(n)).scaled(c) for n in X.degrees()}, check=False)
    N = _outer_nullhomotopic(X, X, rng)
    first = DoubleMap(X, X, {n: first.component(n) + N.component(n) for n in X.degrees()}, check=False)
    mode = rng.random()
    if mode < 0.25:
        F = first
    else:
        F = _into_sum(first, _outer_nullhomotopic(X, Z, rng))
    if not F.commutes():
        raise AssertionError("generator produced a non-morphism")
    return F


def random_lw_map(seed, ring=ZZ, **kw):
    """A random levelwise quasi-isomorphism ``X -> X ⊕ C_A W``."""
    rng = random.Random(seed)
    X = random_double_complex(rng.randrange(1 << 30), ring, **kw)
    unit = ring.convert(rng.choice((1, -1)))
    first = DoubleMap(X, X, {n: ChainMap.identity(X.entry(n)).scaled(unit) for n in X.degrees()}, check=False)
    if rng.random() < 0.3:
        return first
    CW = C_A(X)
    c = ring.convert(rng.choice((0, 1, 2)))
    phi = iota_A(X)
    phi = DoubleMap(X, CW, {n: phi.component(n).scaled(c) for n in X.degrees()}, check=False)
    return _into_sum(first, phi)
