"""Free modules, maps between them, and finitely presented modules.

A :class:`PresentedModule` is the cokernel of its relation matrix: it has
``ngens`` generators and the columns of ``relations`` as relations.  Elements
are columns of length ``ngens``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import matrix as mx
from .groebner import _completion, col_to_vec
from .linalg import columns, from_columns, kernel, solve, span
from .rings import PolynomialRing, RingError
from .snf import invariant_factors

__all__ = [
    "FreeModule",
    "ModuleMap",
    "PresentedModule",
    "FpMap",
    "NotGraded",
    "syzygies",
    "is_injective",
    "power_annihilates",
    "supported_on",
    "pd_at_most",
    "projective_dimension",
    "homology_pair",
    "homology_data",
    "is_isomorphism",
    "infer_grading",
]


class NotGraded(ValueError):
    """Raised when a graded algorithm meets an inhomogeneous presentation."""


@dataclass(frozen=True)
class FreeModule:
    ring: object
    rank: int
    grading: tuple | None = None

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if self.grading is not None and len(self.grading) != self.rank:
            raise ValueError("grading length must equal the rank")


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """Map of free modules given by a ``codomain.rank x domain.rank`` matrix."""

    domain: FreeModule
    codomain: FreeModule
    matrix: object

    def __post_init__(self):
        if self.domain.ring != self.codomain.ring:
            raise RingError("domain and codomain live over different rings")
        if self.matrix.shape != (self.codomain.rank, self.domain.rank):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.codomain.rank}x{self.domain.rank}")

    @classmethod
    def from_matrix(cls, ring, M):
        return cls(FreeModule(ring, M.shape[1]), FreeModule(ring, M.shape[0]), M)

    @property
    def ring(self):
        return self.domain.ring


class PresentedModule:
    """Cokernel of ``relations``: ``ring^ngens / span(columns of relations)``."""

    def __init__(self, ring, ngens, relations=None, grading=None):
        self.ring = ring
        self.ngens = ngens
        if relations is None:
            relations = mx.zeros(ring, ngens, 0)
        if relations.shape[0] != ngens:
            raise ValueError("relation matrix must have one row per generator")
        self.relations = relations
        self.grading = grading

    @classmethod
    def free(cls, ring, n):
        return cls(ring, n)

    @classmethod
    def cokernel(cls, f):
        if isinstance(f, ModuleMap):
            return cls(f.ring, f.codomain.rank, f.matrix)
        raise TypeError("cokernel expects a ModuleMap")

    @property
    def presentation(self):
        return ModuleMap.from_matrix(self.ring, self.relations)

    @cached_property
    def span(self):
        return span(self.ring, self.ngens, [c for c in columns(self.relations) if any(c)])

    def contains(self, col):
        """True iff ``col`` is zero in the module."""
        return not any(col) or self.span.contains(tuple(col))

    def contains_matrix(self, M):
        return all(self.contains(c) for c in columns(M))

    def is_zero(self):
        return self.ngens == 0 or self.span.is_everything()

    def is_free_presentation(self):
        return mx.is_zero(self.relations)

    def identity(self):
        return FpMap(self, self, mx.identity(self.ring, self.ngens), check=False)

    def __repr__(self):
        return f"PresentedModule({self.ring!r}, gens={self.ngens}, relations={self.relations.shape[1]})"


class FpMap:
    """Map of presented modules given on generators."""

    def __init__(self, domain, codomain, matrix, check=True):
        if matrix.shape != (codomain.ngens, domain.ngens):
            raise ValueError("matrix shape does not match the generator counts")
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix
        self.ring = domain.ring
        if check and not self.is_well_defined():
            raise ValueError("matrix does not respect the relations of the domain")

    def is_well_defined(self):
        if self.domain.relations.shape[1] == 0:
            return True
        return self.codomain.contains_matrix(mx.mul(self.ring, self.matrix, self.domain.relations))

    def compose(self, other):
        """``self ∘ other``."""
        return FpMap(other.domain, self.codomain, mx.mul(self.ring, self.matrix, other.matrix), check=False)

    def kernel_generators(self):
        return kernel(self.ring, self.matrix, self.codomain.relations)

    def kernel(self):
        K = self.kernel_generators()
        rel = kernel(self.ring, K, self.domain.relations)
        return PresentedModule(self.ring, K.shape[1], rel)

    def cokernel(self):
        rel = mx.hstack(self.ring, [self.codomain.relations, self.matrix], self.codomain.ngens)
        return PresentedModule(self.ring, self.codomain.ngens, rel)

    def is_injective(self):
        return self.domain.contains_matrix(self.kernel_generators())

    def is_surjective(self):
        return self.cokernel().is_zero()

    def is_zero(self):
        return self.codomain.contains_matrix(self.matrix)

    def inverse(self):
        """Inverse of an isomorphism, obtained by lifting generators."""
        B = mx.identity(self.ring, self.codomain.ngens)
        X = solve(self.ring, self.matrix, B, self.codomain.relations)
        if X is None:
            raise ValueError("map is not surjective")
        return FpMap(self.codomain, self.domain, X)


# ---------------------------------------------------------------------------
# kernels and injectivity


def _require_ring(*rings):
    r0 = rings[0]
    for r in rings[1:]:
        if r != r0:
            raise RingError(f"ring mismatch: {r0!r} vs {r!r}")
    return r0


def syzygies(f):
    """Presentation of ``ker f``; its generator matrix is ``.embedding``."""
    ring = f.ring
    K = kernel(ring, f.matrix)
    rel = kernel(ring, K)
    M = PresentedModule(ring, K.shape[1], rel)
    M.embedding = K
    return M


def is_injective(f):
    if isinstance(f, FpMap):
        return f.is_injective()
    ring = f.ring
    if not (getattr(ring, "is_field", False) or isinstance(ring, PolynomialRing)
            or getattr(ring, "is_euclidean", False)):
        raise RingError("injectivity needs an integral domain")
    return kernel(ring, f.matrix).shape[1] == 0


def is_isomorphism(f):
    if not f.is_well_defined():
        raise ValueError("ill-defined map")
    return f.is_injective() and f.is_surjective()


def homology_data(d1, d0):
    """``(H, K)`` for ``ker d0 / im d1`` with ``K`` the kernel generators in the middle."""
    if d1.codomain is not d0.domain and d1.matrix.shape[0] != d0.matrix.shape[1]:
        raise ValueError("maps are not composable")
    ring = _require_ring(d1.ring, d0.ring)
    comp = mx.mul(ring, d0.matrix, d1.matrix)
    if not d0.codomain.contains_matrix(comp):
        raise ValueError("d0 ∘ d1 is not zero")
    K = kernel(ring, d0.matrix, d0.codomain.relations)
    mid = d0.domain
    mod = mx.hstack(ring, [mid.relations, d1.matrix], mid.ngens)
    rel = kernel(ring, K, mod)
    return PresentedModule(ring, K.shape[1], rel), K


def homology_pair(d1, d0):
    """Presentation of ``ker d0 / im d1``."""
    return homology_data(d1, d0)[0]


# ---------------------------------------------------------------------------
# annihilation and support


def power_annihilates(f, M, bound=16):
    """Least ``m <= bound`` with ``f^m M = 0``, or None."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    ring = M.ring
    if hasattr(f, "ring") and getattr(f, "ring") != ring:
        raise RingError("ring mismatch")
    f = ring.convert(f)
    if M.is_zero():
        return 1
    p = ring.one
    for m in range(1, bound + 1):
        p = p * f
        if all(M.contains(tuple(p if i == j else ring.zero for i in range(M.ngens)))
               for j in range(M.ngens)):
            return m
    return None


def supported_on(M, fs):
    """True iff ``Supp M`` lies in ``V(fs)``: each ``f`` is nilpotent on ``M``."""
    ring = M.ring
    fs = [ring.convert(f) for f in fs]
    if M.is_zero():
        return True
    for f in fs:
        if power_annihilates(f, M, 4) is not None:
            continue
        # saturate the relation module at f until it stops growing
        rel = M.relations
        scalar = mx.scalar(ring, M.ngens, f)
        while True:
            new = kernel(ring, scalar, rel)
            sat = PresentedModule(ring, M.ngens, new)
            if sat.is_zero():
                break
            if PresentedModule(ring, M.ngens, rel).contains_matrix(new):
                return False
            rel = new
    return True


# ---------------------------------------------------------------------------
# gradings and projective dimension


def infer_grading(ring, ngens, relations):
    """Generator degrees making every relation homogeneous, or None."""
    parent = {}
    pot = {}

    def find(a):
        if parent[a] == a:
            return a, 0
        r, p = find(parent[a])
        parent[a] = r
        pot[a] += p
        return r, pot[a]

    def node(a):
        if a not in parent:
            parent[a] = a
            pot[a] = 0

    for i in range(ngens):
        node(("g", i))
    for j in range(relations.shape[1]):
        node(("r", j))
        for i in range(ngens):
            e = relations[i, j]
            if not e:
                continue
            if not e.is_homogeneous():
                return None
            # deg(r_j) = deg(g_i) + deg(e); pot[a] = deg(a) - deg(root)
            ra, pa = find(("r", j))
            rb, pb = find(("g", i))
            want = e.degree()
            if ra == rb:
                if pa - pb != want:
                    return None
            else:
                parent[ra] = rb
                pot[ra] = pb + want - pa
    return tuple(find(("g", i))[1] for i in range(ngens))


def _vdeg(vec, degs, order):
    (m, pos) = next(iter(vec))
    return order.degree(m) + degs[pos]


def _prune(vecs, ngens, one):
    """Drop generators killed by relations with a unit entry."""
    vecs = [dict(v) for v in vecs if v]
    alive = list(range(ngens))
    while True:
        hit = None
        for idx, v in enumerate(vecs):
            for (m, pos), c in v.items():
                if m == one:
                    hit = (idx, pos, c)
                    break
            if hit:
                break
        if hit is None:
            break
        idx, pos, u = hit
        rel = vecs.pop(idx)
        for v in vecs:
            comp = [(m, c) for (m, p), c in v.items() if p == pos]
            for m, c in comp:
                q = c / u
                for (m2, p2), c2 in rel.items():
                    k = (tuple(a + b for a, b in zip(m, m2)), p2)
                    w = v.get(k, 0) - q * c2
                    if w:
                        v[k] = w
                    else:
                        v.pop(k, None)
        vecs = [v for v in vecs if v]
        alive.remove(pos)
    index = {p: i for i, p in enumerate(alive)}
    return [{(m, index[p]): c for (m, p), c in v.items()} for v in vecs], alive


def _minimal_generators(vecs, degs, order):
    """A minimal homogeneous generating subset of ``vecs``."""
    by_deg = {}
    for v in vecs:
        if v:
            by_deg.setdefault(_vdeg(v, degs, order), []).append(v)
    kept = []
    for d in sorted(by_deg):
        gb = _completion(list(kept), order) if kept else None
        echelon = {}
        for v in by_deg[d]:
            r = gb.reduce(v)[0] if gb is not None else dict(v)
            while r:
                t = max(r)
                piv = echelon.get(t)
                if piv is None:
                    break
                c = r[t]
                for k, a in piv.items():
                    w = r.get(k, 0) - c * a
                    if w:
                        r[k] = w
                    else:
                        r.pop(k, None)
            if r:
                t = max(r)
                inv = 1 / r[t]
                echelon[t] = {k: a * inv for k, a in r.items()}
                kept.append(v)
    return kept


def _graded_pd(M, limit=None):
    ring = M.ring
    order = ring.order
    degs = M.grading or infer_grading(ring, M.ngens, M.relations)
    if degs is None:
        raise NotGraded("presentation is not homogeneous for any grading")
    vecs = [col_to_vec(c) for c in columns(M.relations)]
    vecs, alive = _prune(vecs, M.ngens, order.one)
    if not alive:
        return -1
    degs = [degs[i] for i in alive]
    gens = _minimal_generators(vecs, degs, order)
    i = 0
    while gens:
        i += 1
        if limit is not None and i > limit:
            return i
        new_degs = [_vdeg(v, degs, order) for v in gens]
        syz = _completion(list(gens), order, track=True, want_syz=True).syzygies
        degs = new_degs
        gens = _minimal_generators([s for s in syz if s], degs, order)
    return i


def projective_dimension(M, limit=None):
    """Projective dimension; the zero module reports -1.

    With ``limit`` the search stops as soon as the answer exceeds it.
    """
    ring = M.ring
    if M.is_zero():
        return -1
    if getattr(ring, "is_field", False):
        return 0
    if isinstance(ring, PolynomialRing) and ring.ngens > 1:
        return _graded_pd(M, limit)
    # principal ideal domains: free iff torsion-free
    facs = invariant_factors(M.relations, ring) if M.relations.shape[1] else []
    units = all(ring.size(d) == ring.size(ring.one) for d in facs)
    return 0 if units else 1


def pd_at_most(M, p):
    """True iff the minimal free resolution of ``M`` has length at most ``p``."""
    return projective_dimension(M, limit=max(p, 0)) <= p
