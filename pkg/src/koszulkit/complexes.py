"""Bounded chain complexes of free modules.

Homological grading: ``d_n : x_n -> x_{n-1}``.  A complex stores ranks and
differential matrices; absent degrees are zero.  Sign conventions:

* shift: ``x[k]_n = x_{n+k}``, ``d^{x[k]}_n = (-1)^k d_{n+k}``;
* cone: ``(Cone f)_n = x_{n-1} ⊕ y_n`` with ``d = [[-d^x, 0], [-f, d^y]]``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .fpmodules import FpMap, FreeModule, ModuleMap, PresentedModule, homology_data
from .linalg import columns, kernel, solve, span

__all__ = [
    "ChainComplex",
    "ChainMap",
    "Homotopy",
    "PresentedComplex",
    "shift",
    "truncate_brutal",
    "truncate_good",
    "cone",
    "bicomplicial_C",
    "cylinder",
    "homology",
    "is_acyclic",
    "is_quasi_iso",
    "null_homotopy",
    "retraction_splitting",
    "euler_characteristic",
    "direct_sum",
    "PreconditionError",
]


class PreconditionError(ValueError):
    pass


class ChainComplex:
    """Bounded complex of free modules over ``ring``."""

    def __init__(self, ring, ranks, diffs=None, check=True):
        self.ring = ring
        self._ranks = {n: r for n, r in ranks.items() if r}
        self._d = {}
        for n, M in (diffs or {}).items():
            if self.rank(n) and self.rank(n - 1):
                if M.shape != (self.rank(n - 1), self.rank(n)):
                    raise ValueError(f"d_{n} has shape {M.shape}, expected {(self.rank(n - 1), self.rank(n))}")
                self._d[n] = M
        if check and not self.is_complex():
            raise ValueError("d∘d is not zero")

    # -- structure
    @property
    def support(self):
        if not self._ranks:
            return (0, -1)
        return (min(self._ranks), max(self._ranks))

    def degrees(self):
        lo, hi = self.support
        return range(lo, hi + 1)

    @property
    def length(self):
        lo, hi = self.support
        return max(hi - lo, 0)

    def rank(self, n):
        return self._ranks.get(n, 0)

    def module(self, n):
        return FreeModule(self.ring, self.rank(n))

    def d(self, n):
        M = self._d.get(n)
        if M is None:
            return mx.zeros(self.ring, self.rank(n - 1), self.rank(n))
        return M

    def differential(self, n):
        return ModuleMap(self.module(n), self.module(n - 1), self.d(n))

    def is_zero(self):
        return not self._ranks

    def is_complex(self):
        for n in self.degrees():
            if self.rank(n - 2) and not mx.is_zero(mx.mul(self.ring, self.d(n - 1), self.d(n))):
                return False
        return True

    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def concentrated(cls, ring, rank, degree=0):
        """``j(A^rank)`` placed in ``degree``."""
        return cls(ring, {degree: rank})

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self.ring != other.ring or self._ranks != other._ranks:
            return False
        return all(mx.equal(self.d(n), other.d(n)) for n in self.degrees())

    __hash__ = None

    def __repr__(self):
        lo, hi = self.support
        ranks = ", ".join(f"{n}:{self.rank(n)}" for n in self.degrees())
        return f"ChainComplex({self.ring!r}, [{ranks}])"


class ChainMap:
    """Chain map given by per-degree matrices ``f_n : x_n -> y_n``."""

    def __init__(self, domain, codomain, comps=None, check=True):
        self.domain = domain
        self.codomain = codomain
        self.ring = domain.ring
        self._f = {}
        for n, M in (comps or {}).items():
            if domain.rank(n) and codomain.rank(n):
                if M.shape != (codomain.rank(n), domain.rank(n)):
                    raise ValueError(f"f_{n} has shape {M.shape}")
                self._f[n] = M
        if check and not self.commutes():
            raise ValueError("components do not commute with the differentials")

    def degrees(self):
        lo = min(self.domain.support[0], self.codomain.support[0])
        hi = max(self.domain.support[1], self.codomain.support[1])
        return range(lo, hi + 1)

    def component(self, n):
        M = self._f.get(n)
        if M is None:
            return mx.zeros(self.ring, self.codomain.rank(n), self.domain.rank(n))
        return M

    __getitem__ = component

    def commutes(self):
        R = self.ring
        x, y = self.domain, self.codomain
        for n in range(self.degrees().start, self.degrees().stop + 1):
            lhs = mx.mul(R, y.d(n), self.component(n))
            rhs = mx.mul(R, self.component(n - 1), x.d(n))
            if not mx.equal(lhs, rhs):
                return False
        return True

    @classmethod
    def identity(cls, x):
        return cls(x, x, {n: mx.identity(x.ring, x.rank(n)) for n in x.degrees()}, check=False)

    @classmethod
    def zero(cls, x, y):
        return cls(x, y, {}, check=False)

    def compose(self, other):
        """``self ∘ other``."""
        R = self.ring
        comps = {n: mx.mul(R, self.component(n), other.component(n)) for n in other.domain.degrees()}
        return ChainMap(other.domain, self.codomain, comps, check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def _zip(self, other, op):
        comps = {n: op(self.component(n), other.component(n)) for n in self.degrees()}
        return ChainMap(self.domain, self.codomain, comps, check=False)

    def __add__(self, other):
        return self._zip(other, mx.add)

    def __sub__(self, other):
        return self._zip(other, mx.sub)

    def __neg__(self):
        return ChainMap(self.domain, self.codomain, {n: mx.neg(M) for n, M in self._f.items()}, check=False)

    def scaled(self, c):
        return ChainMap(self.domain, self.codomain,
                        {n: mx.scale(self.ring, M, c) for n, M in self._f.items()}, check=False)

    def is_zero(self):
        return all(mx.is_zero(M) for M in self._f.values())

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return all(mx.equal(self.component(n), other.component(n)) for n in self.degrees())

    __hash__ = None

    def __repr__(self):
        return f"ChainMap({self.domain!r} -> {self.codomain!r})"


@dataclass
class Homotopy:
    """Maps ``H_n : x_n -> y_{n+1}``; witnesses ``f - g = dH + Hd``."""

    domain: ChainComplex
    codomain: ChainComplex
    maps: dict

    def component(self, n):
        M = self.maps.get(n)
        if M is None:
            return mx.zeros(self.domain.ring, self.codomain.rank(n + 1), self.domain.rank(n))
        return M

    def verifies(self, f, g=None):
        R = self.domain.ring
        x, y = self.domain, self.codomain
        for n in f.degrees():
            diff = f.component(n) if g is None else mx.sub(f.component(n), g.component(n))
            rhs = mx.add(mx.mul(R, y.d(n + 1), self.component(n)),
                         mx.mul(R, self.component(n - 1), x.d(n)))
            if not mx.equal(diff, rhs):
                return False
        return True


# ---------------------------------------------------------------------------
# constructions


def shift(x, k):
    sign = -1 if k % 2 else 1
    ranks = {n - k: r for n, r in x._ranks.items()}
    diffs = {n - k: (mx.neg(M) if sign < 0 else M) for n, M in x._d.items()}
    return ChainComplex(x.ring, ranks, diffs, check=False)


def shift_map(f, k):
    return ChainMap(shift(f.domain, k), shift(f.codomain, k),
                    {n - k: M for n, M in f._f.items()}, check=False)


def direct_sum(x, y):
    R = x.ring
    lo = min(x.support[0], y.support[0])
    hi = max(x.support[1], y.support[1])
    ranks = {n: x.rank(n) + y.rank(n) for n in range(lo, hi + 1)}
    diffs = {n: mx.block_diag(R, [x.d(n), y.d(n)]) for n in range(lo, hi + 1)}
    return ChainComplex(R, ranks, diffs, check=False)


def truncate_brutal(x, k, side="ge"):
    """``σ_{≥k} x`` (side ``"ge"``) or ``σ_{≤k} x`` (side ``"le"``)."""
    if side not in ("ge", "le"):
        raise ValueError("side must be 'ge' or 'le'")
    keep = (lambda n: n >= k) if side == "ge" else (lambda n: n <= k)
    ranks = {n: r for n, r in x._ranks.items() if keep(n)}
    diffs = {n: M for n, M in x._d.items() if keep(n) and keep(n - 1)}
    return ChainComplex(x.ring, ranks, diffs, check=False)


def cone(f):
    x, y, R = f.domain, f.codomain, f.ring
    lo = min(x.support[0] + 1, y.support[0])
    hi = max(x.support[1] + 1, y.support[1])
    ranks = {n: x.rank(n - 1) + y.rank(n) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi + 1):
        diffs[n] = mx.block(
            R,
            [[mx.neg(x.d(n - 1)), None], [mx.neg(f.component(n - 1)), y.d(n)]],
            [x.rank(n - 2), y.rank(n - 1)],
            [x.rank(n - 1), y.rank(n)],
        )
    return ChainComplex(R, ranks, diffs, check=False)


def cone_inclusion(f):
    """``κ : y -> Cone f``, ``b ↦ (0, b)``."""
    x, y, R = f.domain, f.codomain, f.ring
    C = cone(f)
    comps = {n: mx.vstack(R, [mx.zeros(R, x.rank(n - 1), y.rank(n)), mx.identity(R, y.rank(n))], y.rank(n))
             for n in y.degrees()}
    return ChainMap(y, C, comps, check=False)


def cone_projection(f):
    """``Cone f -> x[-1]``, ``(a, b) ↦ a``; with the shift sign this is a chain map up to sign."""
    x, R = f.domain, f.ring
    C = cone(f)
    xs = shift(x, -1)
    comps = {n: mx.hstack(R, [mx.identity(R, x.rank(n - 1)), mx.zeros(R, x.rank(n - 1), f.codomain.rank(n))],
                          x.rank(n - 1))
             for n in C.degrees()}
    return ChainMap(C, xs, comps, check=False)


def cone_functorial(f, g, a, b):
    """The map ``Cone f -> Cone g`` induced by a commuting square ``g a = b f``."""
    R = f.ring
    Cf, Cg = cone(f), cone(g)
    comps = {n: mx.block_diag(R, [a.component(n - 1), b.component(n)]) for n in Cf.degrees()}
    return ChainMap(Cf, Cg, comps, check=False)


def C(x):
    return cone(ChainMap.identity(x))


def C_map(f):
    """``C(f) : Cx -> Cy``, blockwise ``diag(f_{n-1}, f_n)``."""
    return cone_functorial(ChainMap.identity(f.domain), ChainMap.identity(f.codomain), f, f)


def iota(x):
    """``ι_x : x -> Cx``, ``(0, id)ᵗ``."""
    return cone_inclusion(ChainMap.identity(x))


def bicomplicial_C(x):
    """``(Cx, ι_x, r_x, σ_x)`` with ``CCx_n = x_{n-2} ⊕ x_{n-1} ⊕ x_{n-1} ⊕ x_n``."""
    R = x.ring
    Cx = C(x)
    CCx = C(Cx)
    r, s = {}, {}
    for n in CCx.degrees():
        a, b, c = x.rank(n - 2), x.rank(n - 1), x.rank(n)
        I = lambda k: mx.identity(R, k)
        r[n] = mx.block(R, [[None, I(b), I(b), None], [None, None, None, I(c)]], [b, c], [a, b, b, c])
        s[n] = mx.block(R, [[mx.neg(I(a)), None, None, None],
                            [None, None, I(b), None],
                            [None, I(b), None, None],
                            [None, None, None, I(c)]], [a, b, b, c], [a, b, b, c])
    return Cx, iota(x), ChainMap(CCx, Cx, r), ChainMap(CCx, CCx, s)


@dataclass
class Cylinder:
    cyl: ChainComplex
    j1: ChainMap
    j2: ChainMap
    j3: ChainMap
    beta: ChainMap
    eta: ChainMap
    homotopy: Homotopy  # id_Cyl - j2 β = dH + Hd


def cylinder(f):
    """``Cyl f = y ⊕ Cx`` with ``j1 = (f, -ι)ᵗ``, ``j2``, ``j3``, ``β``, ``η = (κ, μ)``."""
    x, y, R = f.domain, f.codomain, f.ring
    Cx = C(x)
    cyl = direct_sum(y, Cx)
    Cf = cone(f)
    j1, j2, j3, beta, eta, H = {}, {}, {}, {}, {}, {}
    for n in range(min(cyl.support[0], x.support[0]) - 1, max(cyl.support[1], x.support[1]) + 2):
        p, q, m = x.rank(n - 1), x.rank(n), y.rank(n)
        I = lambda k: mx.identity(R, k)
        Z = lambda r, c: mx.zeros(R, r, c)
        j1[n] = mx.vstack(R, [f.component(n), Z(p, q), mx.neg(I(q))], q)
        j2[n] = mx.vstack(R, [I(m), Z(p + q, m)], m)
        j3[n] = mx.vstack(R, [Z(m, p + q), I(p + q)], p + q)
        beta[n] = mx.hstack(R, [I(m), Z(m, p + q)], m)
        eta[n] = mx.block(R, [[None, I(p), None], [I(m), None, f.component(n)]], [p, m], [m, p, q])
        # on the Cx summand H(a, b) = (-b, 0); zero on y
        pn, qn = x.rank(n), x.rank(n + 1)
        H[n] = mx.block(R, [[None, None, None], [None, None, mx.neg(I(q))], [None, None, None]],
                        [y.rank(n + 1), pn, qn], [m, p, q])
    mk = lambda d, c, comps: ChainMap(d, c, comps, check=False)
    return Cylinder(cyl, mk(x, cyl, j1), mk(y, cyl, j2), mk(Cx, cyl, j3), mk(cyl, y, beta),
                    mk(cyl, Cf, eta), Homotopy(cyl, cyl, H))


# ---------------------------------------------------------------------------
# homology


def _free(R, n):
    return PresentedModule(R, n)


def homology_with_generators(x, n):
    R = x.ring
    d1 = FpMap(_free(R, x.rank(n + 1)), _free(R, x.rank(n)), x.d(n + 1), check=False)
    d0 = FpMap(_free(R, x.rank(n)), _free(R, x.rank(n - 1)), x.d(n), check=False)
    return homology_data(d1, d0)


def homology(x, n):
    """``H_n(x)`` as a presented module."""
    return homology_with_generators(x, n)[0]


def exact_at(x, n):
    R = x.ring
    if not x.rank(n):
        return True
    K = kernel(R, x.d(n))
    if not K.shape[1]:
        return True
    sp = span(R, x.rank(n), [c for c in columns(x.d(n + 1)) if any(c)])
    return all(sp.contains(c) for c in columns(K))


def is_acyclic(x):
    return all(exact_at(x, n) for n in x.degrees())


def is_quasi_iso(f):
    return is_acyclic(cone(f))


def induced_map(f, n, src=None, dst=None):
    """``H_n(f)`` as an :class:`FpMap`."""
    R = f.ring
    Hx, Kx = src or homology_with_generators(f.domain, n)
    Hy, Ky = dst or homology_with_generators(f.codomain, n)
    img = mx.mul(R, f.component(n), Kx)
    X = solve(R, Ky, img, f.codomain.d(n + 1))
    if X is None:
        raise ArithmeticError("image of a cycle is not a cycle")
    return FpMap(Hx, Hy, X, check=False)


def euler_characteristic(x):
    return sum((-1) ** (n % 2) * r for n, r in x._ranks.items())


# ---------------------------------------------------------------------------
# truncations with presented entries


class PresentedComplex:
    """Complex of presented modules; used for good truncations."""

    def __init__(self, ring, modules, diffs):
        self.ring = ring
        self.modules = {n: M for n, M in modules.items() if M.ngens}
        self.diffs = diffs

    def module(self, n):
        return self.modules.get(n) or PresentedModule(self.ring, 0)

    def diff(self, n):
        f = self.diffs.get(n)
        if f is None:
            return FpMap(self.module(n), self.module(n - 1),
                         mx.zeros(self.ring, self.module(n - 1).ngens, self.module(n).ngens), check=False)
        return f

    def degrees(self):
        if not self.modules:
            return range(0)
        return range(min(self.modules), max(self.modules) + 1)

    def homology(self, n):
        return homology_data(self.diff(n + 1), self.diff(n))[0]


def truncate_good(x, k, side="le", convention="homology"):
    """Good truncations ``τ_{≤k} x`` (side ``"le"``) and ``τ_{≥k+1} x`` (side ``"ge"``).

    With ``convention="homology"`` degree ``k+1`` carries ``im d_{k+1}`` for
    ``τ_{≤k}`` and ``ker d_{k+1}`` for ``τ_{≥k+1}``, so homology is kept in
    the retained range.  ``convention="literal"`` swaps the two entries.
    """
    if side not in ("le", "ge"):
        raise ValueError("side must be 'le' or 'ge'")
    if convention not in ("homology", "literal"):
        raise ValueError("convention must be 'homology' or 'literal'")
    R = x.ring
    d = x.d(k + 1)
    K = kernel(R, d)
    ker_mod = PresentedModule(R, K.shape[1], kernel(R, K))
    img_mod = PresentedModule(R, d.shape[1], kernel(R, d))
    use_image = (side == "le") == (convention == "homology")
    mods, diffs = {}, {}
    if side == "le":
        for n in x.degrees():
            if n <= k:
                mods[n] = _free(R, x.rank(n))
                diffs[n] = FpMap(mods[n], _free(R, x.rank(n - 1)), x.d(n), check=False)
        top = img_mod if use_image else ker_mod
        mods[k + 1] = top
        M = d if use_image else mx.mul(R, d, K)
        diffs[k + 1] = FpMap(top, _free(R, x.rank(k)), M, check=False)
    else:
        for n in x.degrees():
            if n >= k + 2:
                mods[n] = _free(R, x.rank(n))
        bottom = ker_mod if not use_image else img_mod
        mods[k + 1] = bottom
        for n in x.degrees():
            if n >= k + 3:
                diffs[n] = FpMap(mods[n], mods[n - 1], x.d(n), check=False)
        if use_image:
            # x_{k+2} -> im d_{k+1}: the only natural map is zero
            M = mx.zeros(R, bottom.ngens, x.rank(k + 2))
        else:
            M = solve(R, K, x.d(k + 2))
        diffs[k + 2] = FpMap(_free(R, x.rank(k + 2)), bottom, M, check=False)
    return PresentedComplex(R, mods, diffs)


# ---------------------------------------------------------------------------
# homotopies


def null_homotopy(f):
    """A homotopy ``H`` with ``f = dH + Hd``, or None."""
    R = f.ring
    x, y = f.domain, f.codomain
    degs = list(range(min(x.support[0], y.support[0] - 1), max(x.support[1], y.support[1] - 1) + 1))
    # unknown blocks H_n : x_n -> y_{n+1}
    offs, total = {}, 0
    for n in degs:
        offs[n] = total
        total += y.rank(n + 1) * x.rank(n)
    eqs = []
    rhs = []
    for n in f.degrees():
        ym, xn = y.rank(n), x.rank(n)
        Fn = f.component(n)
        dy = y.d(n + 1)
        dx = x.d(n)
        for i in range(ym):
            for j in range(xn):
                row = [R.zero] * total
                if n in offs:
                    w = y.rank(n + 1)
                    for a in range(w):
                        if dy[i, a]:
                            row[offs[n] + j * w + a] += dy[i, a]
                if n - 1 in offs:
                    w = y.rank(n)
                    for b in range(x.rank(n - 1)):
                        if dx[b, j]:
                            row[offs[n - 1] + b * w + i] += dx[b, j]
                eqs.append(row)
                rhs.append(Fn[i, j])
    if not eqs:
        return Homotopy(x, y, {})
    L = mx.from_lists(R, eqs, len(eqs), total)
    B = mx.from_lists(R, [[v] for v in rhs], len(rhs), 1)
    if total == 0:
        return Homotopy(x, y, {}) if mx.is_zero(B) else None
    U = solve(R, L, B)
    if U is None:
        return None
    maps = {}
    for n in degs:
        w, c = y.rank(n + 1), x.rank(n)
        if w and c:
            M = mx.zeros(R, w, c)
            for j in range(c):
                for a in range(w):
                    M[a, j] = U[offs[n] + j * w + a, 0]
            maps[n] = M
    H = Homotopy(x, y, maps)
    assert H.verifies(f)
    return H


@dataclass
class Splitting:
    """``y ≃ x ⊕ z`` with ``z = Cone i``."""

    z: ChainComplex
    xz: ChainComplex
    phi: ChainMap  # y -> x ⊕ z
    psi: ChainMap  # x ⊕ z -> y
    theta: Homotopy  # phi∘psi - id = dΘ + Θd

    def verify(self):
        y = self.phi.domain
        if not (self.phi.commutes() and self.psi.commutes()):
            return False
        if not (self.psi @ self.phi) == ChainMap.identity(y):
            return False
        return self.theta.verifies(self.phi @ self.psi, ChainMap.identity(self.xz))


def retraction_splitting(i, p):
    """Split ``y`` as ``x ⊕ Cone i`` given a strict retraction ``p ∘ i = id``."""
    x, y, R = i.domain, i.codomain, i.ring
    if p.domain != y or p.codomain != x:
        raise PreconditionError("p must map y back to x")
    if not (p @ i) == ChainMap.identity(x):
        raise PreconditionError("p ∘ i is not the identity")
    z = cone(i)
    xz = direct_sum(x, z)
    phi, psi, th = {}, {}, {}
    lo = min(xz.support[0], y.support[0]) - 1
    hi = max(xz.support[1], y.support[1]) + 1
    I = lambda k: mx.identity(R, k)
    for n in range(lo, hi + 1):
        a, b, c = x.rank(n), x.rank(n - 1), y.rank(n)
        # y_n -> x_n ⊕ x_{n-1} ⊕ y_n
        phi[n] = mx.vstack(R, [p.component(n), mx.zeros(R, b, c), I(c)], c)
        proj = mx.sub(I(c), mx.mul(R, i.component(n), p.component(n)))
        psi[n] = mx.hstack(R, [i.component(n), mx.zeros(R, c, b), proj], c)
        # Θ(a', (a, b)) = (0, (p b - a', 0)) landing in x_{n+1} ⊕ x_n ⊕ y_{n+1}
        th[n] = mx.block(R, [[None, None, None],
                             [mx.neg(I(a)), None, p.component(n)],
                             [None, None, None]],
                         [x.rank(n + 1), a, y.rank(n + 1)], [a, b, c])
    s = Splitting(z, xz, ChainMap(y, xz, phi, check=False), ChainMap(xz, y, psi, check=False),
                  Homotopy(xz, xz, th))
    if not s.verify():
        raise ArithmeticError("splitting failed to verify")
    return s
