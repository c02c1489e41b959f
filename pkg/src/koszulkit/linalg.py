"""Submodules of free modules: membership, lifting and syzygies.

Over ZZ and fields the work is done with the Smith form; over polynomial
rings with module Groebner bases.  Spans are cached on their generators, so
asking the same question twice is cheap.
"""

from __future__ import annotations

from collections import OrderedDict

from .groebner import SubmoduleGB, col_to_vec, vec_to_col
from .matrix import zeros
from .rings import PolynomialRing
from .snf import smith_lists

__all__ = ["Span", "span", "columns", "from_columns", "kernel", "solve", "contains_all"]


def columns(M):
    return [tuple(M[:, j]) for j in range(M.shape[1])]


def from_columns(ring, cols, nrows):
    out = zeros(ring, nrows, len(cols))
    for j, c in enumerate(cols):
        for i, v in enumerate(c):
            out[i, j] = v
    return out


class Span:
    """Submodule of ``ring^rank`` generated by a list of columns."""

    def __init__(self, ring, rank, cols):
        self.ring = ring
        self.rank = rank
        self.cols = list(cols)

    def contains(self, col):
        raise NotImplementedError

    def lift(self, col):
        """Coefficients ``a`` with ``sum a_j cols[j] == col``, or None."""
        raise NotImplementedError

    def syzygies(self):
        """Generators of the relations among ``cols`` (tuples of length len(cols))."""
        raise NotImplementedError

    def unit_vector(self, i):
        z, o = self.ring.zero, self.ring.one
        return tuple(o if j == i else z for j in range(self.rank))

    def is_everything(self):
        return all(self.contains(self.unit_vector(i)) for i in range(self.rank))


class _EuclidSpan(Span):
    def __init__(self, ring, rank, cols):
        super().__init__(ring, rank, cols)
        n = len(self.cols)
        A = [[c[i] for c in self.cols] for i in range(rank)]
        U, D, V = smith_lists(ring, A, rank, n)
        self._U, self._V = U, V
        self._d = []
        for i in range(min(rank, n)):
            if not D[i][i]:
                break
            self._d.append(D[i][i])

    def _solve(self, col):
        w = [sum((u * c for u, c in zip(row, col)), self.ring.zero) for row in self._U]
        k = len(self._d)
        if any(w[i] for i in range(k, self.rank)):
            return None
        y = []
        for d, wi in zip(self._d, w):
            q, r = self.ring.divmod(wi, d)
            if r:
                return None
            y.append(q)
        return y

    def contains(self, col):
        return self._solve(col) is not None

    def lift(self, col):
        y = self._solve(col)
        if y is None:
            return None
        zero = self.ring.zero
        return tuple(sum((row[i] * y[i] for i in range(len(y))), zero) for row in self._V)

    def syzygies(self):
        n = len(self.cols)
        k = len(self._d)
        return [tuple(self._V[i][j] for i in range(n)) for j in range(k, n)]

    def is_everything(self):
        return len(self._d) == self.rank and all(
            d == self.ring.one or (self.ring.is_field and d) for d in self._d)


class _PolySpan(Span):
    def __init__(self, ring, rank, cols):
        super().__init__(ring, rank, cols)
        self.gb = SubmoduleGB(ring, rank, [col_to_vec(c) for c in self.cols])

    def contains(self, col):
        return self.gb.contains(col_to_vec(col))

    def contains_vec(self, vec):
        return self.gb.contains(vec)

    def lift(self, col):
        a = self.gb.lift(col_to_vec(col))
        if a is None:
            return None
        return tuple(vec_to_col(a, self.ring, len(self.cols)))

    def syzygies(self):
        n = len(self.cols)
        return [tuple(vec_to_col(s, self.ring, n)) for s in self.gb.syzygies()]

    def is_everything(self):
        return self.gb.is_everything()


_CACHE = OrderedDict()
_CACHE_SIZE = 8192


def span(ring, rank, cols):
    """Cached :class:`Span` of ``cols`` inside ``ring^rank``."""
    cols = tuple(tuple(c) for c in cols)
    key = (ring, rank, cols)
    hit = _CACHE.get(key)
    if hit is not None:
        _CACHE.move_to_end(key)
        return hit
    cls = _PolySpan if isinstance(ring, PolynomialRing) else _EuclidSpan
    if cls is _EuclidSpan and not getattr(ring, "is_euclidean", False):
        raise TypeError(f"no linear algebra available over {ring!r}")
    out = cls(ring, rank, cols)
    _CACHE[key] = out
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return out


def _nonzero_cols(M):
    return [c for c in columns(M) if any(c)]


def kernel(ring, M, modulo=None):
    """Matrix whose columns generate ``{v : M v in span(modulo)}``."""
    m, n = M.shape
    cols = columns(M)
    extra = _nonzero_cols(modulo) if modulo is not None else []
    syz = span(ring, m, cols + extra).syzygies()
    out = []
    seen = set()
    for s in syz:
        v = s[:n]
        if any(v) and v not in seen:
            seen.add(v)
            out.append(v)
    return from_columns(ring, out, n)


def solve(ring, A, B, modulo=None):
    """``X`` with ``A X == B`` modulo ``span(modulo)``, or None."""
    m, n = A.shape
    extra = _nonzero_cols(modulo) if modulo is not None else []
    sp = span(ring, m, columns(A) + extra)
    out = zeros(ring, n, B.shape[1])
    for j, col in enumerate(columns(B)):
        if not any(col):
            continue
        a = sp.lift(col)
        if a is None:
            return None
        for i in range(n):
            out[i, j] = a[i]
    return out


def contains_all(ring, gens, M, rank=None):
    """True iff every column of ``M`` lies in the span of the columns of ``gens``."""
    rank = gens.shape[0] if rank is None else rank
    sp = span(ring, rank, _nonzero_cols(gens))
    return all(sp.contains(c) for c in columns(M) if any(c))

