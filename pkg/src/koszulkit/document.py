"""Line-oriented text documents for rings, matrices, complexes, cubes and certificates.

Grammar, one statement per line (``#`` starts a comment)::

    koszulkit 1
    ring QQ[x,y]
    poly f = x^2 - y
    ideal I = x^2, y
    sequence fs = a: x; b: y
    params P U= V=a,b p=0
    suite S seed=42 count=10
    matrix M = 2x2 [x, 0; 0, y]
    complex K            # block, closed by "end"
      rank 0 1
      d 1 = 1x2 [x, y]
    end
    chainmap f : K -> L
      at 0 = 1x1 [1]
    end
    cube X : a, b
      vertex {a} 1 rel 1x1 [x]
      boundary {a} a = 1x1 [x]
    end
    cubemap g : X -> Y
      at {} = 1x1 [1]
    end
    double D
      entry 0 = K
      outer 1 = f
    end
    doublemap F : D -> E
      at 0 = f
    end
    certificate Z : D -> E
      header shift 0
      step D E F -> qis
    end

Vertices that are not listed have rank 0; matrices that are not listed are
zero.  Serialization is canonical: statements keep their order, block lines
come in a fixed order, and polynomials are printed in decreasing term order.
"""

from __future__ import annotations

import hashlib
import re

from . import matrix as mx
from .complexes import ChainComplex, ChainMap
from .cubes import Cube, CubeMap
from .fpmodules import PresentedModule
from .koszul import MMParams, RegularSequence
from .rings import ParseError, RingError, parse_ring
from .witness import DoubleComplex, DoubleMap, Step, ZigzagCertificate

__all__ = ["Document", "parse_document", "parse_text", "serialize", "ParseError"]

VERSION = "1"
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*\Z")


class Document:
    """A ring plus named entities, kept in insertion order."""

    def __init__(self, ring=None, version=VERSION):
        self.version = version
        self.ring = ring
        self.entities = {}

    def add(self, name, kind, obj):
        if not _NAME.match(name):
            raise ValueError(f"invalid entity name {name!r}")
        if name in self.entities:
            raise ValueError(f"duplicate entity name {name!r}")
        self.entities[name] = (kind, obj)
        return obj

    def get(self, name, kind=None):
        if name not in self.entities:
            raise KeyError(f"unresolved reference {name!r}")
        k, obj = self.entities[name]
        if kind is not None and k != kind:
            raise KeyError(f"{name!r} is a {k}, not a {kind}")
        return obj

    def names(self, kind):
        return [n for n, (k, _) in self.entities.items() if k == kind]

    def first(self, kind, name=None):
        """The entity called ``name``, or the first of the given kind."""
        if name is not None:
            return self.get(name, kind)
        names = self.names(kind)
        # anonymous sub-objects are emitted first; prefer user-named entities
        names = [n for n in names if not n.startswith("_")] or names
        if not names:
            raise KeyError(f"document has no {kind}")
        return self.get(names[0])

    def serialize(self):
        return serialize(self)

    def digest(self):
        return hashlib.sha256(self.serialize().encode()).hexdigest()


# ---------------------------------------------------------------------------
# formatting


def _fmt_entry(R, a):
    return R.format(a) if hasattr(R, "format") else str(a)


def format_matrix(R, M):
    m, n = M.shape
    rows = "; ".join(", ".join(_fmt_entry(R, M[i, j]) for j in range(n)) for i in range(m))
    return f"{m}x{n} [{rows}]"


def _fmt_set(x, T):
    return "{" + ",".join(x.ordered(T)) + "}"


def _complex_lines(R, K):
    out = [f"  rank {n} {K.rank(n)}" for n in K.degrees() if K.rank(n)]
    for n in K.degrees():
        D = K.d(n)
        if D.size and not mx.is_zero(D):
            out.append(f"  d {n} = {format_matrix(R, D)}")
    return out


def _chainmap_lines(R, f):
    out = []
    for n in f.degrees():
        M = f.component(n)
        if M.size and not mx.is_zero(M):
            out.append(f"  at {n} = {format_matrix(R, M)}")
    return out


def _cube_lines(R, x):
    out = []
    for T in x.subsets():
        v = x.vertices[T]
        if not v.ngens:
            continue
        line = f"  vertex {_fmt_set(x, T)} {v.ngens}"
        rel = v.relations
        keep = [j for j in range(rel.shape[1]) if any(rel[i, j] for i in range(rel.shape[0]))]
        if keep:
            line += " rel " + format_matrix(R, rel[:, keep])
        out.append(line)
    for T in x.subsets():
        for k in x.ordered(T):
            M = x.d(T, k)
            if M.size and not mx.is_zero(M):
                out.append(f"  boundary {_fmt_set(x, T)} {k} = {format_matrix(R, M)}")
    return out


def _cubemap_lines(R, f):
    out = []
    for T in f.domain.subsets():
        M = f.maps[T]
        if M.size and not mx.is_zero(M):
            out.append(f"  at {_fmt_set(f.domain, T)} = {format_matrix(R, M)}")
    return out


class _Namer:
    """Assigns names to anonymous sub-objects, sharing equal ones."""

    def __init__(self, doc):
        self.doc = doc
        self.lines = []
        self.known = {}  # (kind, body) -> name
        self.used = set(doc.entities)
        self.counter = {}

    def fresh(self, prefix):
        i = self.counter.get(prefix, 0)
        while f"{prefix}{i}" in self.used:
            i += 1
        self.counter[prefix] = i + 1
        name = f"{prefix}{i}"
        self.used.add(name)
        return name

    def emit(self, kind, header_tail, body, prefix):
        key = (kind, header_tail, tuple(body))
        if key in self.known:
            return self.known[key]
        name = self.fresh(prefix)
        self.known[key] = name
        self.lines.append(f"{kind} {name}{header_tail}")
        self.lines.extend(body)
        self.lines.append("end")
        return name

    def complex(self, K):
        return self.emit("complex", "", _complex_lines(self.doc.ring, K), "_K")

    def chainmap(self, f):
        a, b = self.complex(f.domain), self.complex(f.codomain)
        return self.emit("chainmap", f" : {a} -> {b}", _chainmap_lines(self.doc.ring, f), "_f")

    def cube(self, x):
        return self.emit("cube", f" : {', '.join(x.directions)}", _cube_lines(self.doc.ring, x), "_X")

    def double(self, X):
        body = []
        for n in X.degrees():
            if not X.entry(n).is_zero():
                body.append(f"  entry {n} = {self.complex(X.entry(n))}")
        for n in X.degrees():
            d = X.d(n)
            if not d.is_zero():
                body.append(f"  outer {n} = {self.chainmap(d)}")
        return self.emit("double", "", body, "_D")

    def doublemap(self, F):
        a, b = self.double(F.domain), self.double(F.codomain)
        body = []
        for n in F.degrees():
            c = F.component(n)
            if not c.is_zero():
                body.append(f"  at {n} = {self.chainmap(c)}")
        return self.emit("doublemap", f" : {a} -> {b}", body, "_F")


def _header_value(v):
    return str(v).replace(" ", "")


def serialize(doc):
    """Canonical text of a document."""
    R = doc.ring
    namer = _Namer(doc)
    main = []
    for name, (kind, obj) in doc.entities.items():
        if kind == "poly":
            main.append(f"poly {name} = {_fmt_entry(R, obj)}")
        elif kind == "ideal":
            main.append(f"ideal {name} = " + ", ".join(_fmt_entry(R, g) for g in obj))
        elif kind == "sequence":
            main.append(f"sequence {name} = " + "; ".join(f"{k}: {_fmt_entry(R, obj[k])}" for k in obj.labels))
        elif kind == "params":
            U = ",".join(sorted(obj.U))
            main.append(f"params {name} U={U} V={','.join(obj.V)} p={obj.p}")
        elif kind == "suite":
            main.append(f"suite {name} " + " ".join(f"{k}={obj[k]}" for k in sorted(obj)))
        elif kind == "matrix":
            main.append(f"matrix {name} = {format_matrix(R, obj)}")
        elif kind == "complex":
            main += [f"complex {name}", *_complex_lines(R, obj), "end"]
        elif kind == "chainmap":
            a, b = _ref(doc, namer, obj.domain, "complex"), _ref(doc, namer, obj.codomain, "complex")
            main += [f"chainmap {name} : {a} -> {b}", *_chainmap_lines(R, obj), "end"]
        elif kind == "cube":
            main += [f"cube {name} : {', '.join(obj.directions)}", *_cube_lines(R, obj), "end"]
        elif kind == "cubemap":
            a, b = _ref(doc, namer, obj.domain, "cube"), _ref(doc, namer, obj.codomain, "cube")
            main += [f"cubemap {name} : {a} -> {b}", *_cubemap_lines(R, obj), "end"]
        elif kind == "double":
            body = []
            for n in obj.degrees():
                if not obj.entry(n).is_zero():
                    body.append(f"  entry {n} = {_ref(doc, namer, obj.entry(n), 'complex')}")
            for n in obj.degrees():
                if not obj.d(n).is_zero():
                    body.append(f"  outer {n} = {_ref(doc, namer, obj.d(n), 'chainmap')}")
            main += [f"double {name}", *body, "end"]
        elif kind == "doublemap":
            a, b = _ref(doc, namer, obj.domain, "double"), _ref(doc, namer, obj.codomain, "double")
            body = [f"  at {n} = {_ref(doc, namer, obj.component(n), 'chainmap')}"
                    for n in obj.degrees() if not obj.component(n).is_zero()]
            main += [f"doublemap {name} : {a} -> {b}", *body, "end"]
        elif kind == "certificate":
            a, b = _ref(doc, namer, obj.start, "double"), _ref(doc, namer, obj.end, "double")
            body = [f"  header {k} {_header_value(v)}" for k, v in sorted(obj.header.items())]
            for s in obj.steps:
                left = _ref(doc, namer, s.left, "double")
                right = _ref(doc, namer, s.right, "double")
                mp = _ref(doc, namer, s.morphism, "doublemap")
                body.append(f"  step {left} {right} {mp} {s.orientation} {s.tag}")
            main += [f"certificate {name} : {a} -> {b}", *body, "end"]
        else:
            raise ValueError(f"cannot serialize entity kind {kind!r}")
    head = [f"koszulkit {doc.version}"]
    if R is not None:
        head.append(f"ring {R!r}")
    return "\n".join(head + namer.lines + main) + "\n"


def _ref(doc, namer, obj, kind):
    """Name of ``obj``: a named entity of the document if one is equal, else an anonymous one."""
    for n, (k, o) in doc.entities.items():
        if k == kind and o is obj:
            return n
    return getattr(namer, kind)(obj)


# ---------------------------------------------------------------------------
# parsing


class _Line:
    def __init__(self, no, text):
        self.no = no
        self.text = text

    def error(self, msg, col=1):
        return ParseError(msg, line=self.no, column=col)


_MATRIX = re.compile(r"\s*(\d+)\s*x\s*(\d+)\s*\[(.*)\]\s*\Z")


class _Parser:
    def __init__(self, text):
        self.lines = []
        for no, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].rstrip()
            if body.strip():
                self.lines.append(_Line(no, body))
        self.i = 0
        self.doc = Document()

    # -- helpers
    @property
    def R(self):
        return self.doc.ring

    def need_ring(self, line):
        if self.R is None:
            raise line.error("no ring declared before this statement")

    def scalar(self, line, text, col):
        try:
            return self.R.parse(text.strip()) if text.strip() else self.R.zero
        except ParseError as exc:
            c = col + (text.find(text.strip()) if text.strip() else 0)
            raise line.error(exc.message, c + ((exc.column or 1) - 1)) from None
        except RingError as exc:
            raise line.error(f"ring mismatch: {exc}", col) from None

    def matrix(self, line, text, col):
        m = _MATRIX.match(text)
        if not m:
            raise line.error("expected a matrix literal 'RxC [a, b; c, d]'", col)
        r, c = int(m.group(1)), int(m.group(2))
        body = m.group(3)
        base = col + m.start(3)
        M = mx.zeros(self.R, r, c)
        if r == 0 or c == 0:
            if body.strip():
                raise line.error("entries given for an empty matrix", base)
            return M
        rows = body.split(";")
        if len(rows) != r:
            raise line.error(f"expected {r} rows, found {len(rows)}", base)
        off = base
        for i, row in enumerate(rows):
            cells = row.split(",")
            if len(cells) != c:
                raise line.error(f"row {i + 1}: expected {c} entries, found {len(cells)}", off)
            coff = off
            for j, cell in enumerate(cells):
                M[i, j] = self.scalar(line, cell, coff)
                coff += len(cell) + 1
            off += len(row) + 1
        return M

    def name(self, line, text, col):
        t = text.strip()
        if not _NAME.match(t):
            raise line.error(f"invalid name {t!r}", col)
        return t

    def ref(self, line, text, kind, col):
        n = text.strip()
        try:
            return self.doc.get(n, kind)
        except KeyError as exc:
            raise line.error(exc.args[0], col) from None

    def add(self, line, name, kind, obj):
        try:
            self.doc.add(name, kind, obj)
        except ValueError as exc:
            raise line.error(str(exc)) from None

    def split_arrow(self, line, rest, col):
        m = re.fullmatch(r"\s*([^\s:]+)\s*:\s*([^\s]+)\s*->\s*([^\s]+)\s*", rest)
        if not m:
            raise line.error("expected 'NAME : SOURCE -> TARGET'", col)
        return m.group(1), (m.group(2), col + m.start(2)), (m.group(3), col + m.start(3))

    def block(self, start):
        body = []
        while True:
            if self.i >= len(self.lines):
                raise start.error("block is not closed with 'end'")
            ln = self.lines[self.i]
            self.i += 1
            if ln.text.strip() == "end":
                return body
            body.append(ln)

    # -- driver
    def run(self):
        if not self.lines:
            raise ParseError("empty document", line=1, column=1)
        first = self.lines[0]
        m = re.fullmatch(r"koszulkit\s+(\S+)", first.text.strip())
        if not m:
            raise first.error("expected 'koszulkit <version>' header")
        if m.group(1) != VERSION:
            raise first.error(f"unsupported document version {m.group(1)!r}")
        self.i = 1
        while self.i < len(self.lines):
            ln = self.lines[self.i]
            self.i += 1
            kw, _, rest = ln.text.strip().partition(" ")
            col = ln.text.find(rest) + 1 if rest else len(ln.text) + 1
            handler = getattr(self, "st_" + kw, None)
            if handler is None:
                raise ln.error(f"unknown statement {kw!r}", ln.text.find(kw) + 1)
            if kw != "ring":
                self.need_ring(ln)
            handler(ln, rest, col)
        return self.doc

    # -- statements
    def st_ring(self, ln, rest, col):
        if self.R is not None:
            raise ln.error("ring declared twice")
        try:
            self.doc.ring = parse_ring(rest)
        except (ParseError, RingError) as exc:
            raise ln.error(getattr(exc, "message", str(exc)), col) from None

    def _assign(self, ln, rest, col):
        name, eq, value = rest.partition("=")
        if not eq:
            raise ln.error("expected '='", col + len(rest))
        return self.name(ln, name, col), value, col + len(name) + 1

    def st_poly(self, ln, rest, col):
        name, value, vcol = self._assign(ln, rest, col)
        self.add(ln, name, "poly", self.scalar(ln, value, vcol))

    def st_ideal(self, ln, rest, col):
        name, value, vcol = self._assign(ln, rest, col)
        gens, off = [], vcol
        for part in value.split(","):
            gens.append(self.scalar(ln, part, off))
            off += len(part) + 1
        self.add(ln, name, "ideal", gens)

    def st_sequence(self, ln, rest, col):
        name, value, vcol = self._assign(ln, rest, col)
        fam, off = {}, vcol
        for part in value.split(";"):
            label, colon, poly = part.partition(":")
            if not colon:
                raise ln.error("expected 'label: polynomial'", off)
            lab = self.name(ln, label, off)
            if lab in fam:
                raise ln.error(f"duplicate label {lab!r}", off)
            fam[lab] = self.scalar(ln, poly, off + len(label) + 1)
            off += len(part) + 1
        self.add(ln, name, "sequence", RegularSequence(self.R, fam, check=False))

    def _keyvals(self, ln, text, col):
        out = {}
        for m in re.finditer(r"(\S+?)=(\S*)", text):
            out[m.group(1)] = (m.group(2), col + m.start())
        rest = re.sub(r"\S+?=\S*", "", text).strip()
        if rest:
            raise ln.error(f"expected key=value, found {rest.split()[0]!r}", col + text.find(rest))
        return out

    def st_params(self, ln, rest, col):
        name, _, tail = rest.strip().partition(" ")
        name = self.name(ln, name, col)
        kv = self._keyvals(ln, tail, col + len(name) + 1)
        for k in kv:
            if k not in ("U", "V", "p"):
                raise ln.error(f"unknown parameter {k!r}", kv[k][1])
        U = [s for s in kv.get("U", ("", 0))[0].split(",") if s]
        V = [s for s in kv.get("V", ("", 0))[0].split(",") if s]
        try:
            p = int(kv.get("p", ("0", 0))[0])
            params = MMParams(frozenset(U), tuple(V), p)
        except ValueError as exc:
            raise ln.error(f"bad parameters: {exc}", col) from None
        self.add(ln, name, "params", params)

    def st_suite(self, ln, rest, col):
        name, _, tail = rest.strip().partition(" ")
        name = self.name(ln, name, col)
        kv = self._keyvals(ln, tail, col + len(name) + 1)
        cfg = {}
        for k, (v, c) in kv.items():
            try:
                cfg[k] = int(v)
            except ValueError:
                raise ln.error(f"suite value {k}={v!r} is not an integer", c) from None
        self.add(ln, name, "suite", cfg)

    def st_matrix(self, ln, rest, col):
        name, value, vcol = self._assign(ln, rest, col)
        self.add(ln, name, "matrix", self.matrix(ln, value, vcol))

    def _sub(self, line, kw_expected):
        """Split a block line into (keyword, rest, rest column)."""
        t = line.text
        stripped = t.strip()
        kw, _, rest = stripped.partition(" ")
        if kw not in kw_expected:
            raise line.error(f"unexpected {kw!r} inside block (expected one of {', '.join(kw_expected)})",
                             t.find(kw) + 1)
        col = t.find(rest) + 1 if rest else len(t) + 1
        return kw, rest, col

    def _int(self, ln, text, col):
        try:
            return int(text.strip())
        except ValueError:
            raise ln.error(f"expected an integer, found {text.strip()!r}", col) from None

    def st_complex(self, ln, rest, col):
        name = self.name(ln, rest, col)
        ranks, diffs = {}, {}
        body = self.block(ln)
        for b in body:
            kw, r, c = self._sub(b, ("rank", "d"))
            if kw == "rank":
                parts = r.split()
                if len(parts) != 2:
                    raise b.error("expected 'rank DEGREE RANK'", c)
                ranks[self._int(b, parts[0], c)] = self._int(b, parts[1], c)
        for b in body:
            kw, r, c = self._sub(b, ("rank", "d"))
            if kw == "d":
                deg, eq, m = r.partition("=")
                if not eq:
                    raise b.error("expected 'd DEGREE = MATRIX'", c)
                n = self._int(b, deg, c)
                M = self.matrix(b, m, c + len(deg) + 1)
                if M.shape != (ranks.get(n - 1, 0), ranks.get(n, 0)):
                    raise b.error(f"d {n} has shape {M.shape[0]}x{M.shape[1]}, ranks need "
                                  f"{ranks.get(n - 1, 0)}x{ranks.get(n, 0)}", c)
                diffs[n] = M
        try:
            K = ChainComplex(self.R, ranks, diffs)
        except ValueError as exc:
            raise ln.error(f"complex {name}: {exc}") from None
        self.add(ln, name, "complex", K)

    def st_chainmap(self, ln, rest, col):
        name, (a, ca), (b, cb) = self.split_arrow(ln, rest, col)
        x, y = self.ref(ln, a, "complex", ca), self.ref(ln, b, "complex", cb)
        comps = {}
        for bl in self.block(ln):
            kw, r, c = self._sub(bl, ("at",))
            deg, eq, m = r.partition("=")
            if not eq:
                raise bl.error("expected 'at DEGREE = MATRIX'", c)
            n = self._int(bl, deg, c)
            M = self.matrix(bl, m, c + len(deg) + 1)
            if M.shape != (y.rank(n), x.rank(n)):
                raise bl.error(f"component {n} has the wrong shape", c)
            comps[n] = M
        try:
            f = ChainMap(x, y, comps)
        except ValueError as exc:
            raise ln.error(f"chainmap {name}: {exc}") from None
        self.add(ln, name, "chainmap", f)

    def _set(self, ln, text, dirs, col):
        t = text.strip()
        if not (t.startswith("{") and t.endswith("}")):
            raise ln.error(f"expected a subset literal like {{a,b}}, found {t!r}", col)
        labels = [s.strip() for s in t[1:-1].split(",") if s.strip()]
        for s in labels:
            if s not in dirs:
                raise ln.error(f"unknown direction {s!r}", col)
        return frozenset(labels)

    def st_cube(self, ln, rest, col):
        name, colon, dtext = rest.partition(":")
        if not colon:
            raise ln.error("expected 'cube NAME : d1, d2, ...'", col)
        name = self.name(ln, name, col)
        dirs = [s.strip() for s in dtext.split(",") if s.strip()]
        for s in dirs:
            if not _NAME.match(s):
                raise ln.error(f"invalid direction label {s!r}", col)
        verts, bnd = {}, {}
        body = self.block(ln)
        for b in body:
            kw, r, c = self._sub(b, ("vertex", "boundary"))
            if kw != "vertex":
                continue
            m = re.fullmatch(r"\s*(\{[^}]*\})\s+(\d+)\s*(?:rel\s+(.*))?", r)
            if not m:
                raise b.error("expected 'vertex {..} RANK [rel MATRIX]'", c)
            T = self._set(b, m.group(1), dirs, c)
            n = int(m.group(2))
            rel = mx.zeros(self.R, n, 0)
            if m.group(3):
                rel = self.matrix(b, m.group(3), c + m.start(3))
                if rel.shape[0] != n:
                    raise b.error("relation matrix has the wrong number of rows", c + m.start(3))
            verts[T] = PresentedModule(self.R, n, rel)
        for b in body:
            kw, r, c = self._sub(b, ("vertex", "boundary"))
            if kw != "boundary":
                continue
            m = re.fullmatch(r"\s*(\{[^}]*\})\s+(\S+)\s*=(.*)", r)
            if not m:
                raise b.error("expected 'boundary {..} DIRECTION = MATRIX'", c)
            T = self._set(b, m.group(1), dirs, c)
            k = m.group(2)
            if k not in T:
                raise b.error(f"direction {k!r} is not in the subset", c + m.start(2))
            M = self.matrix(b, m.group(3), c + m.start(3))
            src = verts.get(T)
            dst = verts.get(T - {k})
            if M.shape != (dst.ngens if dst else 0, src.ngens if src else 0):
                raise b.error("boundary matrix has the wrong shape", c + m.start(3))
            bnd[(T, k)] = M
        try:
            x = Cube(self.R, dirs, verts, bnd)
        except ValueError as exc:
            raise ln.error(f"cube {name}: {exc}") from None
        self.add(ln, name, "cube", x)

    def st_cubemap(self, ln, rest, col):
        name, (a, ca), (b, cb) = self.split_arrow(ln, rest, col)
        x, y = self.ref(ln, a, "cube", ca), self.ref(ln, b, "cube", cb)
        maps = {}
        for bl in self.block(ln):
            kw, r, c = self._sub(bl, ("at",))
            st, eq, m = r.partition("=")
            if not eq:
                raise bl.error("expected 'at {..} = MATRIX'", c)
            T = self._set(bl, st, x.directions, c)
            M = self.matrix(bl, m, c + len(st) + 1)
            if M.shape != (y.rank(T), x.rank(T)):
                raise bl.error("component has the wrong shape", c)
            maps[T] = M
        try:
            f = CubeMap(x, y, maps)
        except ValueError as exc:
            raise ln.error(f"cubemap {name}: {exc}") from None
        self.add(ln, name, "cubemap", f)

    def st_double(self, ln, rest, col):
        name = self.name(ln, rest, col)
        entries, outer = {}, {}
        for b in self.block(ln):
            kw, r, c = self._sub(b, ("entry", "outer"))
            deg, eq, ref = r.partition("=")
            if not eq:
                raise b.error(f"expected '{kw} DEGREE = NAME'", c)
            n = self._int(b, deg, c)
            rc = c + len(deg) + 1
            if kw == "entry":
                entries[n] = self.ref(b, ref, "complex", rc)
            else:
                outer[n] = self.ref(b, ref, "chainmap", rc)
        try:
            X = DoubleComplex(self.R, entries, outer)
        except ValueError as exc:
            raise ln.error(f"double {name}: {exc}") from None
        self.add(ln, name, "double", X)

    def st_doublemap(self, ln, rest, col):
        name, (a, ca), (b, cb) = self.split_arrow(ln, rest, col)
        X, Y = self.ref(ln, a, "double", ca), self.ref(ln, b, "double", cb)
        comps = {}
        for bl in self.block(ln):
            kw, r, c = self._sub(bl, ("at",))
            deg, eq, ref = r.partition("=")
            if not eq:
                raise bl.error("expected 'at DEGREE = NAME'", c)
            comps[self._int(bl, deg, c)] = self.ref(bl, ref, "chainmap", c + len(deg) + 1)
        try:
            F = DoubleMap(X, Y, comps, check=False)
        except ValueError as exc:
            raise ln.error(f"doublemap {name}: {exc}") from None
        self.add(ln, name, "doublemap", F)

    def st_certificate(self, ln, rest, col):
        name, (a, ca), (b, cb) = self.split_arrow(ln, rest, col)
        start, end = self.ref(ln, a, "double", ca), self.ref(ln, b, "double", cb)
        header, steps = {}, []
        for bl in self.block(ln):
            kw, r, c = self._sub(bl, ("header", "step"))
            parts = r.split()
            if kw == "header":
                if len(parts) != 2:
                    raise bl.error("expected 'header KEY VALUE'", c)
                v = parts[1]
                header[parts[0]] = int(v) if re.fullmatch(r"-?\d+", v) else (v == "True" if v in ("True", "False") else v)
                continue
            if len(parts) != 5:
                raise bl.error("expected 'step LEFT RIGHT MAP ORIENTATION TAG'", c)
            left = self.ref(bl, parts[0], "double", c)
            right = self.ref(bl, parts[1], "double", c)
            mp = self.ref(bl, parts[2], "doublemap", c)
            if parts[3] not in ("->", "<-"):
                raise bl.error(f"orientation must be '->' or '<-', found {parts[3]!r}", c)
            if parts[4] not in ("qis", "lw"):
                raise bl.error(f"tag must be 'qis' or 'lw', found {parts[4]!r}", c)
            steps.append(Step(left, right, mp, parts[3], parts[4]))
        self.add(ln, name, "certificate", ZigzagCertificate(start, end, steps, header))


def parse_text(text):
    """Parse document text; raises :class:`ParseError` with line and column."""
    return _Parser(text).run()


def parse_document(path):
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())
