"""Smith normal form over Euclidean domains (ZZ, k[x], and fields)."""

from __future__ import annotations

from .matrix import to_lists, from_lists

__all__ = ["smith_normal_form", "smith_lists", "invariant_factors", "NotEuclidean"]


class NotEuclidean(ValueError):
    pass


def _euclid(ring):
    if not getattr(ring, "is_euclidean", False):
        raise NotEuclidean(f"{ring!r} is not a Euclidean domain")
    return ring


def smith_lists(ring, M, nrows, ncols, transforms=True):
    """Smith form on list-of-lists data.

    Returns ``(U, D, V)`` with ``U*M*V == D``; ``U``/``V`` are None when
    ``transforms`` is False.  Diagonal entries are normalized (positive
    integers, monic polynomials, 1 over a field) and satisfy d_i | d_{i+1}.
    """
    _euclid(ring)
    zero, one = ring.zero, ring.one
    size, dm = ring.size, ring.divmod
    A = [list(r) for r in M]
    U = [[one if i == j else zero for j in range(nrows)] for i in range(nrows)] if transforms else None
    V = [[one if i == j else zero for j in range(ncols)] for i in range(ncols)] if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in A:
            r[dst] = r[dst] - q * r[src]
        if V is not None:
            for r in V:
                r[dst] = r[dst] - q * r[src]

    t = 0
    while t < min(nrows, ncols):
        # pivot: nonzero entry of minimal size in the remaining block
        best = None
        for i in range(t, nrows):
            row = A[i]
            for j in range(t, ncols):
                if row[j]:
                    s = size(row[j])
                    if best is None or s < best[0]:
                        best = (s, i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    q, r = dm(A[i][t], p)
                    add_row(i, t, q)
                    if r:
                        dirty = True
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q, r = dm(A[t][j], p)
                    add_col(j, t, q)
                    if r:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, nrows):
                    if A[i][t] and (best is None or size(A[i][t]) < best[0]):
                        best = (size(A[i][t]), i, "r")
                for j in range(t, ncols):
                    if A[t][j] and (best is None or size(A[t][j]) < best[0]):
                        best = (size(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if A[i][j] and dm(A[i][j], p)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # fold the offending row into row t and repeat
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
            if U is not None:
                U[t] = [a + b for a, b in zip(U[t], U[bad])]
        u = ring.canonical_unit(A[t][t])
        if u != one:
            A[t] = [a * u for a in A[t]]
            if U is not None:
                U[t] = [a * u for a in U[t]]
        t += 1
    return U, A, V


def smith_normal_form(M, ring):
    """Return ``(U, D, V)`` as numpy object arrays with ``U @ M @ V == D``.

    ``ring`` must be Euclidean: ZZ, a field, or a one-variable polynomial ring.
    """
    nrows, ncols = M.shape
    U, D, V = smith_lists(ring, to_lists(M), nrows, ncols)
    return (from_lists(ring, U, nrows, nrows),
            from_lists(ring, D, nrows, ncols),
            from_lists(ring, V, ncols, ncols))


def invariant_factors(M, ring):
    """Nonzero diagonal entries of the Smith form."""
    nrows, ncols = M.shape
    _, D, _ = smith_lists(ring, to_lists(M), nrows, ncols, transforms=False)
    out = []
    for i in range(min(nrows, ncols)):
        if D[i][i]:
            out.append(D[i][i])
    return out


def module_type(M):
    """Isomorphism invariants ``(free rank, torsion factors)`` of a presented module.

    ``M`` is a :class:`PresentedModule` over a Euclidean ring; unit factors are dropped.
    """
    ring = M.ring
    factors = invariant_factors(M.relations, ring) if M.relations.shape[1] else []
    torsion = sorted(str(f * ring.canonical_unit(f)) for f in factors if not ring.divides(f, ring.one))
    return M.ngens - len(factors), tuple(torsion)
