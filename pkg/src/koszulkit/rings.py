"""Coefficient rings, monomial orders and sparse multivariate polynomials.

Supported rings: the integers, the rationals, prime fields and polynomial
rings over the rationals or a prime field.  Elements are plain Python values
(``int``, ``gmpy2.mpq``, :class:`Fp`) or :class:`Polynomial`.
"""

from __future__ import annotations

import re
from gmpy2 import mpq

__all__ = [
    "RingError",
    "ParseError",
    "Fp",
    "IntegerRing",
    "RationalField",
    "PrimeField",
    "PolynomialRing",
    "MonomialOrder",
    "Polynomial",
    "ZZ",
    "QQ",
    "GF",
    "ring_from_descriptor",
]


class RingError(ValueError):
    """Raised on ring mismatches or unsupported coefficient rings."""


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# scalar rings


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _c(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise RingError("mixed prime fields")
            return other.v
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, n):
        return Fp(pow(self.v, n, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class _ScalarRing:
    is_field = False
    is_polynomial = False
    ngens = 0

    def __call__(self, x):
        return self.convert(x)

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def is_zero(self, a):
        return not a

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(str(self.descriptor()))

    def __repr__(self):
        return self.name


class IntegerRing(_ScalarRing):
    name = "ZZ"
    is_euclidean = True

    def convert(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, str):
            s = x.strip()
            if not re.fullmatch(r"[+-]?\d+", s):
                raise ParseError(f"not an integer: {x!r}")
            return int(s)
        if type(x).__name__ == "mpq" and x.denominator == 1:
            return int(x.numerator)
        raise RingError(f"cannot convert {x!r} to ZZ")

    def format(self, a):
        return str(a)

    def parse(self, s):
        return self.convert(s)

    def descriptor(self):
        return {"kind": "integers"}

    # euclidean interface
    def size(self, a):
        return abs(a)

    def divmod(self, a, b):
        return divmod(a, b)

    def canonical_unit(self, a):
        # unit u with u*a normalized
        return -1 if a < 0 else 1

    def unit_inverse(self, u):
        return u

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return b % a == 0


class RationalField(_ScalarRing):
    name = "QQ"
    is_field = True
    is_euclidean = True

    def convert(self, x):
        if isinstance(x, str):
            s = x.strip()
            if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
                raise ParseError(f"not a rational number: {x!r}")
            return mpq(s)
        try:
            return mpq(x)
        except (TypeError, ValueError) as exc:
            raise RingError(f"cannot convert {x!r} to QQ") from exc

    def format(self, a):
        return str(a)

    def parse(self, s):
        return self.convert(s)

    def descriptor(self):
        return {"kind": "rationals"}

    def size(self, a):
        return 0 if a else -1

    def divmod(self, a, b):
        return a / b, self.zero

    def canonical_unit(self, a):
        return 1 / a if a else mpq(1)

    def unit_inverse(self, u):
        return 1 / u

    def divides(self, a, b):
        return bool(a) or not b


class PrimeField(_ScalarRing):
    is_field = True
    is_euclidean = True

    def __init__(self, p):
        if not _is_prime(p):
            raise RingError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def convert(self, x):
        if isinstance(x, Fp):
            if x.p != self.p:
                raise RingError("mixed prime fields")
            return x
        if isinstance(x, str):
            s = x.strip()
            m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", s)
            if not m:
                raise ParseError(f"not a field element: {x!r}")
            num = Fp(int(m.group(1)), self.p)
            if m.group(2):
                return num / int(m.group(2))
            return num
        if isinstance(x, int):
            return Fp(x, self.p)
        if type(x).__name__ == "mpq":
            return Fp(int(x.numerator), self.p) / int(x.denominator)
        raise RingError(f"cannot convert {x!r} to {self.name}")

    def format(self, a):
        return str(a.v)

    def parse(self, s):
        return self.convert(s)

    def descriptor(self):
        return {"kind": "prime-field", "p": self.p}

    def size(self, a):
        return 0 if a else -1

    def divmod(self, a, b):
        return a / b, self.zero

    def canonical_unit(self, a):
        return 1 / a if a else self.one

    def unit_inverse(self, u):
        return 1 / u

    def divides(self, a, b):
        return bool(a) or not b


ZZ = IntegerRing()
QQ = RationalField()


def GF(p):
    return PrimeField(p)


# ---------------------------------------------------------------------------
# monomial orders
#
# Monomials are stored in an order-specific integer encoding whose plain tuple
# comparison is the monomial order.  The encodings are linear in the exponent
# vector, so products and quotients are componentwise sums and differences.


def _add(a, b):
    return tuple(map(int.__add__, a, b))


def _sub(a, b):
    return tuple(map(int.__sub__, a, b))


class MonomialOrder:
    NAMES = ("grevlex", "deglex", "lex")

    def __init__(self, name, nvars):
        if name == "grlex":
            name = "deglex"
        if name not in self.NAMES:
            raise RingError(f"unknown monomial order {name!r}")
        self.name = name
        self.nvars = nvars
        self.one = (0,) * (nvars if name == "lex" else nvars + 1)
        if name == "lex":
            self.divides = self._divides_up
            self.lcm = self._lcm_lex
        elif name == "deglex":
            self.divides = self._divides_up_graded
            self.lcm = self._lcm_deglex
        else:
            self.divides = self._divides_down_graded
            self.lcm = self._lcm_grevlex

    mul = staticmethod(_add)
    quo = staticmethod(_sub)

    def encode(self, exps):
        exps = tuple(int(e) for e in exps)
        if self.name == "lex":
            return exps
        if self.name == "deglex":
            return (sum(exps),) + exps
        return (sum(exps),) + tuple(-e for e in reversed(exps))

    def decode(self, key):
        if self.name == "lex":
            return key
        if self.name == "deglex":
            return key[1:]
        return tuple(-e for e in reversed(key[1:]))

    def degree(self, key):
        if self.name == "lex":
            return sum(key)
        return key[0]

    @staticmethod
    def _divides_up(a, b):
        for x, y in zip(a, b):
            if x > y:
                return False
        return True

    @staticmethod
    def _divides_up_graded(a, b):
        if a[0] > b[0]:
            return False
        for i in range(1, len(a)):
            if a[i] > b[i]:
                return False
        return True

    @staticmethod
    def _divides_down_graded(a, b):
        if a[0] > b[0]:
            return False
        for i in range(1, len(a)):
            if a[i] < b[i]:
                return False
        return True

    @staticmethod
    def _lcm_lex(a, b):
        return tuple(map(max, a, b))

    @staticmethod
    def _lcm_deglex(a, b):
        rest = tuple(map(max, a[1:], b[1:]))
        return (sum(rest),) + rest

    @staticmethod
    def _lcm_grevlex(a, b):
        rest = tuple(map(min, a[1:], b[1:]))
        return (-sum(rest),) + rest

    def coprime(self, a, b):
        ea, eb = self.decode(a), self.decode(b)
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.name, self.nvars) == (other.name, other.nvars)

    def __hash__(self):
        return hash((self.name, self.nvars))


# ---------------------------------------------------------------------------
# polynomial rings

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolynomialRing(_ScalarRing):
    is_polynomial = True

    def __init__(self, base, names, order="grevlex"):
        if not getattr(base, "is_field", False):
            raise RingError("polynomial rings are supported over QQ and GF(p) only")
        names = tuple(names)
        if not names:
            raise RingError("a polynomial ring needs at least one variable")
        if len(set(names)) != len(names):
            raise RingError("variable names must be distinct")
        for n in names:
            if not _IDENT.match(n):
                raise RingError(f"invalid variable name {n!r}")
        self.base = base
        self.names = names
        self.ngens = len(names)
        self.order = MonomialOrder(order, len(names))
        self.name = f"{base.name}[{','.join(names)}]"
        self.is_euclidean = len(names) == 1
        self._one_key = self.order.one

    def descriptor(self):
        return {
            "kind": "polynomial-ring",
            "base": self.base.descriptor(),
            "variables": list(self.names),
            "order": self.order.name,
        }

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and self.base == other.base
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.base.name, self.names, self.order.name))

    def __repr__(self):
        if self.order.name == "grevlex":
            return self.name
        return f"{self.name}<{self.order.name}>"

    def convert(self, x):
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise RingError(f"element of {x.ring!r} used in {self!r}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        c = self.base.convert(x)
        return Polynomial(self, {self._one_key: c} if c else {})

    @property
    def gens(self):
        out = []
        for i in range(self.ngens):
            e = [0] * self.ngens
            e[i] = 1
            out.append(Polynomial(self, {self.order.encode(e): self.base.one}))
        return tuple(out)

    def gen(self, name):
        return self.gens[self.names.index(name)]

    def monomial(self, exps, coeff=1):
        c = self.base.convert(coeff)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {self.order.encode(exps): c})

    def from_dict(self, d):
        """Polynomial from a mapping exponent-tuple -> coefficient."""
        terms = {}
        for e, c in d.items():
            c = self.base.convert(c)
            if c:
                k = self.order.encode(e)
                v = terms.get(k, 0) + c
                if v:
                    terms[k] = v
                else:
                    terms.pop(k, None)
        return Polynomial(self, terms)

    def with_order(self, order):
        return PolynomialRing(self.base, self.names, order)

    def extend(self, extra):
        """The ring with extra variables appended; returns (ring, embedding)."""
        R = PolynomialRing(self.base, self.names + tuple(extra), self.order.name)

        def embed(f):
            return R.from_dict({e + (0,) * len(extra): c for e, c in f.terms.items()})

        return R, embed

    def format(self, a):
        return a.to_string()

    def parse(self, s):
        return _PolyParser(self, s).parse()

    # euclidean interface (univariate only)
    def size(self, a):
        return a.degree() if a else -1

    def divmod(self, a, b):
        return a.univariate_divmod(b)

    def canonical_unit(self, a):
        if not a:
            return self.one
        return self(1 / a.leading_coefficient())

    def unit_inverse(self, u):
        return self(1 / u.constant_coefficient())

    def divides(self, a, b):
        if not a:
            return not b
        return not self.divmod(b, a)[1]


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("ring", "_t", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self._t = terms
        self._hash = None

    # -- accessors
    @property
    def terms(self):
        dec = self.ring.order.decode
        return {dec(k): c for k, c in self._t.items()}

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def is_constant(self):
        return not self._t or (len(self._t) == 1 and self.ring._one_key in self._t)

    def constant_coefficient(self):
        return self._t.get(self.ring._one_key, self.ring.base.zero)

    def leading_key(self):
        return max(self._t)

    def leading_monomial(self):
        return self.ring.order.decode(max(self._t))

    def leading_coefficient(self):
        return self._t[max(self._t)]

    def degree(self):
        if not self._t:
            return -1
        deg = self.ring.order.degree
        return max(deg(k) for k in self._t)

    def is_homogeneous(self):
        deg = self.ring.order.degree
        return len({deg(k) for k in self._t}) <= 1

    def monic(self):
        if not self._t:
            return self
        return self * (1 / self.leading_coefficient())

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        try:
            return self.ring.convert(other)
        except (RingError, ParseError):
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self._t)
        for k, c in o._t.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return Polynomial(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {k: -c for k, c in self._t.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            t = {}
            for k1, c1 in self._t.items():
                for k2, c2 in other._t.items():
                    k = _add(k1, k2)
                    v = t.get(k, 0) + c1 * c2
                    if v:
                        t[k] = v
                    else:
                        t.pop(k, None)
            return Polynomial(self.ring, t)
        try:
            c = self.ring.base.convert(other)
        except (RingError, ParseError):
            return NotImplemented
        if not c:
            return Polynomial(self.ring, {})
        return Polynomial(self.ring, {k: v * c for k, v in self._t.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant() or not other:
                q, r = self.exact_divmod(other)
                if r:
                    raise ArithmeticError("inexact polynomial division")
                return q
            other = other.constant_coefficient()
        c = self.ring.base.convert(other)
        return self * (1 / c)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._t == other._t
        if isinstance(other, (int, Fp)) or type(other).__name__ == "mpq":
            if not other:
                return not self._t
            return self._t == {self.ring._one_key: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def exact_divmod(self, g):
        """Multivariate division by a single polynomial (quotient, remainder)."""
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        order = self.ring.order
        lk = max(g._t)
        lc = g._t[lk]
        p = dict(self._t)
        q = {}
        r = {}
        while p:
            k = max(p)
            c = p[k]
            if order.divides(lk, k):
                m = _sub(k, lk)
                f = c / lc
                q[m] = f
                for gk, gc in g._t.items():
                    kk = _add(gk, m)
                    v = p.get(kk, 0) - f * gc
                    if v:
                        p[kk] = v
                    else:
                        p.pop(kk, None)
            else:
                r[k] = c
                del p[k]
        return Polynomial(self.ring, q), Polynomial(self.ring, r)

    def univariate_divmod(self, g):
        if self.ring.ngens != 1:
            raise RingError("univariate division needs a one-variable ring")
        return self.exact_divmod(g)

    def evaluate(self, point):
        dec = self.ring.order.decode
        total = self.ring.base.zero
        for k, c in self._t.items():
            term = c
            for v, e in zip(point, dec(k)):
                if e:
                    term = term * v**e
            total = total + term
        return total

    # -- text form
    def sorted_terms(self):
        dec = self.ring.order.decode
        return [(dec(k), self._t[k]) for k in sorted(self._t, reverse=True)]

    def to_string(self):
        if not self._t:
            return "0"
        names = self.ring.names
        fmt = self.ring.base.format
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
            )
            s = fmt(c)
            neg = s.startswith("-")
            if neg:
                s = s[1:]
            if mono:
                body = mono if s == "1" else f"{s}*{mono}"
            else:
                body = s
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"


class _PolyParser:
    """Recursive-descent parser: sums of products of numbers, variables, powers."""

    _TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")

    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(1) is not None:
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def _next(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _fail(self, msg, col):
        raise ParseError(msg, column=col + 1)

    def parse(self):
        if not self.tokens:
            self._fail("empty polynomial", 0)
        value = self._sum()
        kind, val, col = self._peek()
        if kind is not None:
            self._fail(f"unexpected {val!r}", col)
        return value

    def _sum(self):
        kind, val, _ = self._peek()
        sign = 1
        if kind == "op" and val in "+-":
            self._next()
            sign = -1 if val == "-" else 1
        value = self._product() * sign
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val in "+-":
                self._next()
                term = self._product()
                value = value + term if val == "+" else value - term
            else:
                return value

    def _product(self):
        value = self._factor()
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val == "*":
                self._next()
                value = value * self._factor()
            elif kind == "op" and val == "/":
                self._next()
                k2, v2, c2 = self._next()
                if k2 != "num":
                    self._fail("only division by integer constants is allowed", c2)
                if int(v2) == 0:
                    self._fail("division by zero", c2)
                value = value / int(v2)
            else:
                return value

    def _factor(self):
        kind, val, col = self._next()
        if kind == "num":
            base = self.ring(int(val))
        elif kind == "name":
            if val not in self.ring.names:
                self._fail(f"unknown variable {val!r}", col)
            base = self.ring.gen(val)
        elif kind == "op" and val == "(":
            base = self._sum()
            k2, v2, c2 = self._next()
            if v2 != ")":
                self._fail("expected ')'", c2)
        elif kind == "op" and val == "-":
            return -self._factor()
        else:
            self._fail("unexpected end of input" if kind is None else f"unexpected {val!r}", col)
        kind, val, _ = self._peek()
        if kind == "op" and val == "^":
            self._next()
            k2, v2, c2 = self._next()
            if k2 != "num":
                self._fail("exponent must be a non-negative integer", c2)
            base = base ** int(v2)
        return base


# ---------------------------------------------------------------------------


def ring_from_descriptor(d):
    kind = d.get("kind")
    if kind == "integers":
        return ZZ
    if kind == "rationals":
        return QQ
    if kind == "prime-field":
        return GF(int(d["p"]))
    if kind == "polynomial-ring":
        return PolynomialRing(ring_from_descriptor(d["base"]), d["variables"], d.get("order", "grevlex"))
    raise RingError(f"unknown ring kind {kind!r}")


def parse_ring(text):
    """Parse ``ZZ``, ``QQ``, ``GF(7)`` or ``QQ[x,y]`` (optionally ``QQ[x,y]<lex>``)."""
    s = text.strip()
    m = re.fullmatch(r"(ZZ|QQ|GF\(\s*(\d+)\s*\))\s*(?:\[([^\]]*)\])?\s*(?:<\s*(\w+)\s*>)?", s)
    if not m:
        raise ParseError(f"cannot parse ring {text!r}")
    base = {"ZZ": ZZ, "QQ": QQ}.get(m.group(1)) or GF(int(m.group(2)))
    if m.group(3) is None:
        if m.group(4):
            raise ParseError("monomial order given for a ring without variables")
        return base
    names = [n.strip() for n in m.group(3).split(",") if n.strip()]
    return PolynomialRing(base, names, m.group(4) or "grevlex")
