"""Helpers for exact matrices stored as numpy object arrays.

Entries are ring elements (``int``, ``mpq``, ``Fp`` or ``Polynomial``).  Every
constructor here fills arrays with genuine ring elements, so later arithmetic
never mixes in bare Python ints.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "zeros",
    "identity",
    "matrix",
    "from_lists",
    "to_lists",
    "is_zero",
    "equal",
    "block",
    "hstack",
    "vstack",
    "block_diag",
    "scalar",
]


def zeros(ring, m, n):
    out = np.empty((m, n), dtype=object)
    z = ring.zero
    for idx in np.ndindex(m, n):
        out[idx] = z
    return out


def identity(ring, n):
    out = zeros(ring, n, n)
    one = ring.one
    for i in range(n):
        out[i, i] = one
    return out


def scalar(ring, n, c):
    out = zeros(ring, n, n)
    c = ring.convert(c)
    for i in range(n):
        out[i, i] = c
    return out


def matrix(ring, rows, nrows=None, ncols=None):
    """Matrix from nested sequences; entries are converted into ``ring``."""
    rows = [list(r) for r in rows]
    if nrows is None:
        nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    out = zeros(ring, nrows, ncols)
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise ValueError("ragged matrix rows")
        for j, v in enumerate(r):
            out[i, j] = ring.convert(v)
    return out


def from_lists(ring, rows, nrows, ncols):
    out = np.empty((nrows, ncols), dtype=object)
    for i in range(nrows):
        for j in range(ncols):
            out[i, j] = rows[i][j]
    return out


def to_lists(M):
    return [list(r) for r in M]


def clean(ring, M):
    """Coerce every entry of ``M`` into ``ring`` (numpy may leave bare ints)."""
    out = np.empty(M.shape, dtype=object)
    for idx in np.ndindex(*M.shape):
        out[idx] = ring.convert(M[idx])
    return out


def mul(ring, A, B):
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    if A.shape[1] == 0:
        return zeros(ring, A.shape[0], B.shape[1])
    return clean(ring, A.dot(B))


def is_zero(M):
    return not any(bool(v) for v in M.flat)


def equal(A, B):
    if A.shape != B.shape:
        return False
    return all(not (a - b) for a, b in zip(A.flat, B.flat))


def hstack(ring, mats, nrows):
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return zeros(ring, nrows, 0)
    return np.hstack(mats)


def vstack(ring, mats, ncols):
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return zeros(ring, 0, ncols)
    return np.vstack(mats)


def block(ring, rows, row_sizes, col_sizes):
    """Assemble a block matrix; ``None`` blocks are zero."""
    out = zeros(ring, sum(row_sizes), sum(col_sizes))
    r0 = 0
    for bi, rs in enumerate(row_sizes):
        c0 = 0
        for bj, cs in enumerate(col_sizes):
            B = rows[bi][bj]
            if B is not None and rs and cs:
                if B.shape != (rs, cs):
                    raise ValueError(f"block ({bi},{bj}) has shape {B.shape}, expected {(rs, cs)}")
                out[r0:r0 + rs, c0:c0 + cs] = B
            c0 += cs
        r0 += rs
    return out


def block_diag(ring, mats):
    rs = [m.shape[0] for m in mats]
    cs = [m.shape[1] for m in mats]
    rows = [[mats[i] if i == j else None for j in range(len(mats))] for i in range(len(mats))]
    return block(ring, rows, rs, cs)


def neg(M):
    out = np.empty(M.shape, dtype=object)
    for idx in np.ndindex(*M.shape):
        out[idx] = -M[idx]
    return out


def scale(ring, M, c):
    c = ring.convert(c)
    out = np.empty(M.shape, dtype=object)
    for idx in np.ndindex(*M.shape):
        out[idx] = M[idx] * c
    return out


def add(A, B):
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    out = np.empty(A.shape, dtype=object)
    for idx in np.ndindex(*A.shape):
        out[idx] = A[idx] + B[idx]
    return out


def sub(A, B):
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    out = np.empty(A.shape, dtype=object)
    for idx in np.ndindex(*A.shape):
        out[idx] = A[idx] - B[idx]
    return out


def fraction_free_rank(M):
    """Rank over the fraction field by division-free elimination (integral domains)."""
    rows = [list(r) for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        for i in range(rank + 1, len(rows)):
            a = rows[i][c]
            if a:
                rows[i] = [p * x - a * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank
