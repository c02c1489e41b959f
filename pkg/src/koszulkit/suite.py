"""Property suites with independent oracles.

Each property is a function ``(index, seed) -> (status, detail)`` where
``status`` is ``"pass"``, ``"fail"`` or ``"inconclusive"``.  Samples are
derived deterministically from the suite seed, the property name and the
sample index, so a rerun reproduces every record.
"""

from __future__ import annotations

import contextlib
import itertools
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from . import complexes as cx
from . import matrix as mx
from . import witness as wt
from .complexes import ChainComplex, ChainMap, PreconditionError, euler_characteristic, retraction_splitting
from .cubes import is_admissible, subsets, totalize, verify_totisom
from .groebner import Ideal, is_regular_sequence
from .koszul import (
    SEQUENCE_FAMILIES,
    Inconclusive,
    MMParams,
    RegularSequence,
    direct_sum_cubes,
    ext_functor,
    h_functor,
    identity_iso,
    is_in_MM,
    is_koszul_cube,
    quasi_split_witness,
    random_koszul_cube,
    random_mm_cube,
    res_functor,
    typ_cube,
    wgp_check,
)
from .fpmodules import PresentedModule
from .rings import QQ, ZZ, PolynomialRing
from .snf import invariant_factors, module_type

__all__ = ["PROPERTIES", "run_suite", "sample_seed", "mutation", "threads_from_env"]

LABELS = ("a", "b", "c")


def sample_seed(seed, prop, index):
    return random.Random(f"{seed}:{prop}:{index}").randrange(1 << 31)


@lru_cache(maxsize=None)
def _ring3():
    return PolynomialRing(QQ, ["x", "y", "z"])


@lru_cache(maxsize=None)
def sequence(family, ndirs):
    """The ``ndirs``-element prefix of a sequence family, labelled a, b, c."""
    R = _ring3()
    polys = SEQUENCE_FAMILIES[family][:ndirs]
    return RegularSequence(R, dict(zip(LABELS, polys)), check=False)


def _random_sequence(rng, ndirs=None):
    n = ndirs or rng.randint(1, 3)
    return sequence(rng.randrange(len(SEQUENCE_FAMILIES)), n)


def koszul_sample(s):
    rng = random.Random(s)
    fs = _random_sequence(rng)
    return fs, random_koszul_cube(fs, seed=rng.randrange(1 << 30))


# ---------------------------------------------------------------------------
# criterion 1: H_p(Tot x) = 0 for p != 0 and H_0(Tot x) = H_0^S(x)


def prop_totisom(i, s):
    fs, x = koszul_sample(s)
    rep = verify_totisom(x)
    if not rep.passed:
        return "fail", f"failing degrees {rep.failing_degrees}, h0 iso {rep.h0_iso}"
    if not wgp_check(x, fs, validate=False).passed:
        return "fail", "quotient map is not a quasi-isomorphism"
    return "pass", f"{len(x.directions)} directions"


# ---------------------------------------------------------------------------
# criterion 2: is_koszul_cube agrees with membership in M(∅; S)(0)


def adversarial_cube(s):
    """A cube that is not Koszul: non-monic, wrongly supported, or with a non-free vertex."""
    rng = random.Random(s)
    fs = _random_sequence(rng)
    R = fs.ring
    dirs = fs.labels
    kind = rng.choice(("non-monic", "support", "pd"))
    base = typ_cube(fs, {k: rng.randint(1, 2) for k in dirs})
    k0 = rng.choice(dirs)
    if kind == "non-monic":
        bnd = {key: (mx.zeros(R, 1, 1) if key[1] == k0 else M) for key, M in base.boundaries.items()}
        bad = type(base)(R, dirs, dict(base.vertices), bnd, check=False)
    elif kind == "support":
        others = [k for k in dirs if k != k0]
        # a variable not dividing f_k never has f_k^N in its ideal
        free = [v for v in range(R.ngens) if any(e[v] == 0 for e in fs[k0].terms)]
        g = fs[rng.choice(others)] if others and rng.random() < 0.5 else R.gens[rng.choice(free)]
        bnd = {key: (mx.matrix(R, [[g]]) if key[1] == k0 else M) for key, M in base.boundaries.items()}
        bad = type(base)(R, dirs, dict(base.vertices), bnd, check=False)
    else:
        h = R.gens[rng.randrange(R.ngens)]
        verts = dict(base.vertices)
        verts[frozenset()] = PresentedModule(R, 1, mx.matrix(R, [[h]]))
        bad = type(base)(R, dirs, verts, dict(base.boundaries), check=False)
    if rng.random() < 0.5:
        other = random_koszul_cube(fs, seed=rng.randrange(1 << 30))
        bad = direct_sum_cubes([other, bad])
    return fs, bad, kind


def _agreement(fs, x):
    try:
        k = is_koszul_cube(x, fs)
    except Inconclusive as exc:
        return "inconclusive", str(exc), None
    m = is_in_MM(x, MMParams(frozenset(), fs.labels, 0), fs)
    return ("pass" if k == m else "fail"), f"koszul={k} mm={m}", k


def prop_definition(i, s):
    fs, x = koszul_sample(s)
    status, detail, k = _agreement(fs, x)
    if status == "pass" and not k:
        return "fail", "generated cube rejected: " + detail
    return status, detail


def prop_definition_adversarial(i, s):
    fs, x, kind = adversarial_cube(s)
    status, detail, k = _agreement(fs, x)
    if status == "pass" and k:
        return "fail", f"{kind} non-example accepted"
    return status, f"{kind}: {detail}"


# ---------------------------------------------------------------------------
# criteria 3 and 4: certificates


def prop_zigzag(i, s):
    X = wt.random_double_complex(s)
    try:
        cert = wt.zigzag_to_tot(X)
    except wt.CertificateError as exc:
        return "fail", str(exc)
    m = cert.header["outer_degree"]
    target = wt.DoubleComplex.concentrated(cx.shift(wt.tot_outer(X), m), m) if not X.is_zero() else X
    if cert.end != target:
        return "fail", "endpoint is not the shifted total complex"
    if X.length == 1 and cert.tags() != [("->", "qis"), ("<-", "lw")]:
        return "fail", f"length-1 tags {cert.tags()}"
    return "pass", f"outer length {X.length}, {len(cert.steps)} steps"


def prop_cone_compare(i, s):
    F = wt.random_double_map(s)
    try:
        cert = wt.cone_compare(F)
    except wt.CertificateError as exc:
        return "fail", str(exc)
    if cert.tags() != [("->", "qis"), ("<-", "lw")]:
        return "fail", f"tags {cert.tags()}"
    HA = wt.total_homology_table(wt.cone_A(F))
    HB = wt.total_homology_table(wt.cone_B(F))
    for k in sorted(set(HA) | set(HB)):
        ta = module_type(HA[k]) if k in HA else (0, ())
        tb = module_type(HB[k]) if k in HB else (0, ())
        if ta != tb:
            return "fail", f"H_{k} differs: {ta} vs {tb}"
    return "pass", ""


def prop_solid(i, s):
    F = wt.random_lw_map(s)
    try:
        cert = wt.solid_witness(F)
    except (wt.CertificateError, PreconditionError) as exc:
        return "fail", str(exc)
    if not cert.end.is_levelwise_acyclic():
        return "fail", "endpoint has a non-acyclic entry"
    return "pass", f"{len(cert.steps)} steps"


# ---------------------------------------------------------------------------
# criterion 5: quasi-split witness


SPLITS = [tuple(c) for n in range(4) for c in itertools.combinations(LABELS, n)]


def prop_quasi_split(i, s):
    rng = random.Random(s)
    U = SPLITS[i % len(SPLITS)]
    fs = sequence(rng.randrange(len(SEQUENCE_FAMILIES)), 3)
    V = tuple(k for k in LABELS if k not in U)
    x = random_mm_cube(fs, U, seed=rng.randrange(1 << 30))
    rep = quasi_split_witness(x, MMParams(frozenset(U), V, len(U)), fs, twist_seed=rng.randrange(1 << 30))
    if not rep.passed:
        return "fail", (f"U={U} exact={rep.exact} offending={rep.offending} trivial={rep.r_trivial} "
                        f"member={rep.r_member} alpha_beta={rep.alpha_beta}")
    return "pass", f"U={''.join(U) or '-'}"


# ---------------------------------------------------------------------------
# criterion 6: retraction splitting


@lru_cache(maxsize=None)
def _ring_qx():
    return PolynomialRing(QQ, ["x"])


def _rand_entry(R, rng):
    if R is ZZ:
        return rng.randint(-3, 3)
    x = R.gens[0]
    return R.convert(rng.randint(-2, 2)) + R.convert(rng.randint(-1, 1)) * x


def random_complex(R, rng, lo=0, length=2, max_rank=2):
    """Direct sum of ``[R -c-> R]`` and ``R`` pieces, twisted degreewise."""
    ranks, d = {}, {}
    entries = []
    for _ in range(rng.randint(1, 4)):
        n = rng.randint(lo, lo + length)
        if rng.random() < 0.6 and n > lo:
            if ranks.get(n, 0) >= max_rank or ranks.get(n - 1, 0) >= max_rank:
                continue
            c = _rand_entry(R, rng)
            if R is not ZZ and not c:
                c = R.one
            entries.append((n, ranks.get(n, 0), ranks.get(n - 1, 0), c))
            ranks[n] = ranks.get(n, 0) + 1
            ranks[n - 1] = ranks.get(n - 1, 0) + 1
        elif ranks.get(n, 0) < max_rank:
            ranks[n] = ranks.get(n, 0) + 1
    for n in ranks:
        d[n] = mx.zeros(R, ranks.get(n - 1, 0), ranks[n])
    for n, a, b, c in entries:
        d[n][b, a] = R.convert(c)
    g = {n: _automorphism(R, r, rng) for n, r in ranks.items()}
    for n in list(d):
        if ranks.get(n - 1, 0):
            d[n] = mx.mul(R, mx.mul(R, g[n - 1][0], d[n]), g[n][1])
    return ChainComplex(R, ranks, d), g


def _automorphism(R, n, rng):
    g, gi = mx.identity(R, n), mx.identity(R, n)
    for _ in range(3 if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = R.convert(_rand_entry(R, rng))
        E, Ei = mx.identity(R, n), mx.identity(R, n)
        E[i, j], Ei[i, j] = c, -c
        g, gi = mx.mul(R, E, g), mx.mul(R, gi, Ei)
    return g, gi


def random_retraction(s):
    """``(i, p)`` with ``p ∘ i = id``: ``y = x ⊕ z`` twisted, ``p = (id, h)``."""
    rng = random.Random(s)
    R = ZZ if rng.random() < 0.5 else _ring_qx()
    x, _ = random_complex(R, rng)
    z, _ = random_complex(R, rng)
    y = cx.direct_sum(x, z)
    h = wt._inner_nullhomotopic(R, z, x, rng)
    lo = min(x.support[0], z.support[0])
    hi = max(x.support[1], z.support[1])
    inc, proj = {}, {}
    for n in range(lo, hi + 1):
        a, b = x.rank(n), z.rank(n)
        inc[n] = mx.vstack(R, [mx.identity(R, a), mx.zeros(R, b, a)], a)
        proj[n] = mx.hstack(R, [mx.identity(R, a), h.component(n)], a)
    g = {n: _automorphism(R, y.rank(n), rng) for n in y.degrees()}
    yt = ChainComplex(R, {n: y.rank(n) for n in y.degrees()},
                      {n: mx.mul(R, mx.mul(R, g[n - 1][0], y.d(n)), g[n][1])
                       for n in y.degrees() if y.rank(n - 1)})
    i = ChainMap(x, yt, {n: mx.mul(R, g[n][0], inc[n]) for n in x.degrees() if n in g})
    p = ChainMap(yt, x, {n: mx.mul(R, proj[n], g[n][1]) for n in x.degrees() if n in g})
    return i, p


def prop_retraction(i, s):
    inc, p = random_retraction(s)
    try:
        sp = retraction_splitting(inc, p)
    except (PreconditionError, ArithmeticError) as exc:
        return "fail", str(exc)
    if not sp.verify():
        return "fail", "splitting does not verify"
    return "pass", repr(inc.ring)


# ---------------------------------------------------------------------------
# criterion 7: functor identities


def prop_functors(i, s):
    rng = random.Random(s)
    fs = sequence(rng.randrange(len(SEQUENCE_FAMILIES)), 3)
    x = random_koszul_cube(fs, seed=rng.randrange(1 << 30))
    checked = 0
    for W in subsets(LABELS):
        if not W:
            continue
        W = tuple(k for k in LABELS if k in W)
        xr = res_functor(x, W, rng.randint(0, 1))
        e = ext_functor(xr, W, LABELS)
        for j in (0, 1):
            if not res_functor(e, W, j) == xr:
                return "fail", f"res^{j} ext_{W} is not the identity"
        checked += 1
    for W2 in subsets(LABELS):
        if not W2:
            continue
        W2 = tuple(k for k in LABELS if k in W2)
        rest = tuple(k for k in LABELS if k not in W2)
        y = res_functor(x, W2, 0)
        if not is_admissible(y):
            return "fail", "restricted cube is not admissible"
        for W1 in subsets(rest):
            if not W1:
                continue
            W1 = tuple(k for k in rest if k in W1)
            lhs = h_functor(ext_functor(y, W2, LABELS), W1)
            rhs = ext_functor(h_functor(y, W1), W2, lhs.directions)
            if not identity_iso(lhs, rhs):
                return "fail", f"H_{W1} ext_{W2} differs from ext_{W2} H_{W1}"
            checked += 1
    return "pass", f"{checked} identities"


# ---------------------------------------------------------------------------
# criterion 8: Euler characteristics


def prop_euler(i, s):
    fs, x = koszul_sample(s)
    chi = sum((-1) ** len(T) * x.rank(T) for T in x.subsets())
    if x.directions and chi != 0:
        return "fail", f"vertex alternating sum {chi}"
    if euler_characteristic(totalize(x)) != chi:
        return "fail", "Tot does not preserve the alternating sum"
    rng = random.Random(s)
    R = ZZ if rng.random() < 0.5 else _ring_qx()
    a, _ = random_complex(R, rng)
    b, _ = random_complex(R, rng)
    f = wt._inner_nullhomotopic(R, a, b, rng)
    if euler_characteristic(cx.cone(f)) != euler_characteristic(b) - euler_characteristic(a):
        return "fail", "χ(cone f) != χ(y) - χ(x)"
    return "pass", ""


# ---------------------------------------------------------------------------
# criterion 9: oracles (independent dense linear algebra via sympy)


def _monomials(nv, d):
    return [e for e in itertools.product(range(d + 1), repeat=nv) if sum(e) == d]


def _random_homogeneous(R, d, rng, terms=3):
    mons = _monomials(R.ngens, d)
    out = R.zero
    for e in rng.sample(mons, min(terms, len(mons))):
        out = out + R.monomial(e, rng.randint(-3, 3))
    return out


def random_membership_pair(s):
    rng = random.Random(s)
    nv = rng.randint(1, 3)
    R = PolynomialRing(QQ, ["x", "y", "z"][:nv])
    gens = [g for g in (_random_homogeneous(R, rng.randint(1, 3), rng) for _ in range(rng.randint(1, 3))) if g]
    if not gens:
        gens = [R.gens[0]]
    d = rng.randint(max(g.degree() for g in gens[:1]), 4)
    if rng.random() < 0.5:
        f = R.zero
        for g in gens:
            if g.degree() <= d:
                f = f + _random_homogeneous(R, d - g.degree(), rng) * g
    else:
        f = _random_homogeneous(R, d, rng, terms=rng.randint(1, 4))
    return R, gens, f, d


def dense_membership(R, gens, f, d):
    """``f ∈ (gens)`` in degree ``d`` by rank comparison over QQ (sympy)."""
    import sympy

    if not f:
        return True
    mons = _monomials(R.ngens, d)
    index = {e: j for j, e in enumerate(mons)}
    cols = []
    for g in gens:
        dg = g.degree()
        if dg > d:
            continue
        for m in _monomials(R.ngens, d - dg):
            cols.append(g * R.monomial(m, 1))

    def vec(p):
        v = [0] * len(mons)
        for e, c in p.terms.items():
            v[index[e]] = sympy.Rational(int(c.numerator), int(c.denominator))
        return v

    if not cols:
        return False
    A = sympy.Matrix([vec(c) for c in cols]).T
    B = A.row_join(sympy.Matrix(vec(f)))
    return A.rank() == B.rank()


def prop_gb_oracle(i, s):
    R, gens, f, d = random_membership_pair(s)
    ours = Ideal(R, gens).contains(f)
    theirs = dense_membership(R, gens, f, d)
    return ("pass" if ours == theirs else "fail"), f"member={ours}"


def determinantal_invariants(rows):
    """Invariant factors from gcds of minors, ``d_k = D_k / D_{k-1}``."""
    import sympy

    M = sympy.Matrix(rows)
    m, n = M.shape
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in itertools.combinations(range(m), k):
            for c in itertools.combinations(range(n), k):
                g = math.gcd(g, int(M.extract(list(r), list(c)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def prop_snf_oracle(i, s):
    rng = random.Random(s)
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
    ours = [abs(int(v)) for v in invariant_factors(mx.from_lists(ZZ, rows, m, n), ZZ)]
    theirs = determinantal_invariants(rows)
    return ("pass" if ours == theirs else "fail"), f"{ours}"


# ---------------------------------------------------------------------------
# criterion 10: negative controls


def flipped_cone(f):
    """Cone with the sign of the ``f`` block flipped (a deliberately wrong convention)."""
    c = _ORIGINAL_CONE(f)
    x = f.domain
    diffs = {}
    for n in c.degrees():
        D = c.d(n).copy()
        r0 = x.rank(n - 2)
        c0 = x.rank(n - 1)
        D[r0:, :c0] = mx.neg(D[r0:, :c0])
        diffs[n] = D
    return ChainComplex(c.ring, {n: c.rank(n) for n in c.degrees()}, diffs, check=False)


_ORIGINAL_CONE = cx.cone


@contextlib.contextmanager
def mutation(name):
    """Temporarily inject a known bug; ``"cone-sign"`` flips the sign of ``f`` in cones."""
    if name != "cone-sign":
        raise ValueError(f"unknown mutation {name!r}")
    saved = (cx.cone, wt.cone)
    cx.cone = wt.cone = flipped_cone
    try:
        yield
    finally:
        cx.cone, wt.cone = saved


def prop_negative(i, s):
    rng = random.Random(s)
    kind = ("cone-sign", "non-regular", "mislabeled-qis")[i % 3]
    if kind == "cone-sign":
        X = wt.random_double_complex(s)
        while X.length < 1 or all(X.d(n).is_zero() for n in X.degrees()):
            s = rng.randrange(1 << 31)
            X = wt.random_double_complex(s)
        with mutation("cone-sign"):
            try:
                wt.zigzag_to_tot(X)
            except wt.CertificateError:
                return "pass", "flipped cone rejected"
        return "fail", "flipped cone accepted"
    if kind == "non-regular":
        R = PolynomialRing(QQ, ["x", "y", "z"][:rng.randint(1, 3)])
        g = R.gens[rng.randrange(R.ngens)] ** rng.randint(1, 2)
        if is_regular_sequence([g, g]):
            return "fail", "(g, g) accepted as regular"
        try:
            RegularSequence(R, {"a": g, "b": g})
        except ValueError:
            return "pass", "(g, g) rejected"
        return "fail", "RegularSequence accepted (g, g)"
    X = wt.random_double_complex(s)
    while X.length < 1:
        s = rng.randrange(1 << 31)
        X = wt.random_double_complex(s)
    cert = wt.zigzag_to_tot(X)
    for st in cert.steps:
        if st.tag == "lw":
            bad = wt.Step(st.left, st.right, st.morphism, st.orientation, "qis")
            if wt.verify_step(bad):
                return "fail", "mislabeled step accepted"
    return "pass", "mislabeled steps rejected"


# ---------------------------------------------------------------------------

PROPERTIES = {
    "totisom": prop_totisom,
    "definition": prop_definition,
    "definition-adversarial": prop_definition_adversarial,
    "zigzag": prop_zigzag,
    "cone-compare": prop_cone_compare,
    "solid": prop_solid,
    "quasi-split": prop_quasi_split,
    "retraction": prop_retraction,
    "functors": prop_functors,
    "euler": prop_euler,
    "gb-oracle": prop_gb_oracle,
    "snf-oracle": prop_snf_oracle,
    "negative-controls": prop_negative,
}


def threads_from_env():
    try:
        return max(1, int(os.environ.get("KOSZULKIT_THREADS", "1")))
    except ValueError:
        return 1


def _run_one(args):
    prop, i, s, mutate = args
    fn = PROPERTIES[prop]
    try:
        if mutate:
            with mutation(mutate):
                status, detail = fn(i, s)
        else:
            status, detail = fn(i, s)
    except Inconclusive as exc:
        status, detail = "inconclusive", str(exc)
    except Exception as exc:  # a crash is a failure of that sample
        status, detail = "fail", f"{type(exc).__name__}: {exc}"
    return prop, i, s, status, detail


def run_suite(seed=0, count=10, properties=None, counts=None, mutate=None, threads=None, budget=None):
    """Run properties and return ``(records, tallies, budget_exceeded)``.

    ``counts`` overrides ``count`` per property.  Records are sorted by
    property order and sample index, so the output does not depend on the
    scheduling.
    """
    props = list(properties or PROPERTIES)
    for p in props:
        if p not in PROPERTIES:
            raise KeyError(f"unknown property {p!r}")
    tasks = []
    for p in props:
        n = (counts or {}).get(p, count)
        tasks += [(p, i, sample_seed(seed, p, i), mutate) for i in range(n)]
    threads = threads or threads_from_env()
    start = time.monotonic()
    results = []
    exceeded = False
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for r in pool.map(_run_one, tasks, chunksize=4):
                results.append(r)
                if budget is not None and time.monotonic() - start > budget:
                    exceeded = True
                    break
    else:
        for t in tasks:
            if budget is not None and time.monotonic() - start > budget:
                exceeded = True
                break
            results.append(_run_one(t))
    order = {p: k for k, p in enumerate(props)}
    results.sort(key=lambda r: (order[r[0]], r[1]))
    tallies = {}
    for p in props:
        tallies[p] = {"pass": 0, "fail": 0, "inconclusive": 0, "total": 0}
    for p, i, s, status, detail in results:
        tallies[p][status] += 1
        tallies[p]["total"] += 1
    records = [{"property": p, "index": i, "seed": s, "status": st, "detail": d}
               for p, i, s, st, d in results]
    return records, tallies, exceeded
