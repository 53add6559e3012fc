"""Sparse multivariate polynomials over an exact field.

Monomials are packed into a single Python int so that multiplication of
monomials is integer addition and the graded reverse lexicographic order
(x > y > z > w) is integer comparison::

    key = (total_degree << (16 * n)) - sum(e_i << (16 * i))

Each exponent owns a 16-bit field whose top bit is kept clear; it serves as
the guard bit for the branch-free divisibility test.
"""

from __future__ import annotations

import re
import warnings
from itertools import combinations_with_replacement

from .field import QQ, Field, field_from_descriptor

WIDTH = 16
MAX_EXPONENT = (1 << (WIDTH - 1)) - 1
VARIABLE_NAMES = ("x", "y", "z", "w")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ExponentOverflow(OverflowError):
    pass


class PolyRing:
    """S = k[x, y, z] or k[x, y, z, w] with degrevlex order."""

    def __init__(self, nvars: int = 3, field: Field | str = QQ):
        if nvars not in (3, 4):
            raise ValueError("only 3 or 4 variables are supported")
        self.nvars = nvars
        self.field = field_from_descriptor(field)
        self.names = VARIABLE_NAMES[:nvars]
        self.shift = WIDTH * nvars
        self.mask = (1 << self.shift) - 1
        self.guard = sum(1 << (WIDTH * i + WIDTH - 1) for i in range(nvars))
        self.var_keys = tuple((1 << self.shift) - (1 << (WIDTH * i)) for i in range(nvars))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.nvars == self.nvars and other.field == self.field

    def __hash__(self):
        return hash((self.nvars, self.field))

    def __repr__(self):
        return f"PolyRing({self.nvars}, {self.field!r})"

    # -- monomials --------------------------------------------------------
    def monomial_key(self, exps) -> int:
        if len(exps) != self.nvars:
            raise ValueError("wrong number of exponents")
        total = 0
        packed = 0
        for i, e in enumerate(exps):
            if e < 0:
                raise ValueError("negative exponent")
            if e > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {e} exceeds {MAX_EXPONENT}")
            total += e
            packed |= e << (WIDTH * i)
        if total > MAX_EXPONENT:
            raise ExponentOverflow(f"total degree {total} exceeds {MAX_EXPONENT}")
        return (total << self.shift) - packed

    def packed(self, key: int) -> int:
        return -key & self.mask

    def exponents(self, key: int) -> tuple[int, ...]:
        p = -key & self.mask
        return tuple((p >> (WIDTH * i)) & 0xFFFF for i in range(self.nvars))

    def key_degree(self, key: int) -> int:
        return (key + (-key & self.mask)) >> self.shift

    def divides(self, kb: int, ka: int) -> bool:
        """True when monomial ``kb`` divides monomial ``ka``."""
        g = self.guard
        return (((-ka & self.mask) | g) - (-kb & self.mask)) & g == g

    def lcm_key(self, ka: int, kb: int) -> int:
        ea, eb = self.exponents(ka), self.exponents(kb)
        return self.monomial_key([max(a, b) for a, b in zip(ea, eb)])

    def monomials(self, degree: int) -> list[int]:
        """All monomial keys of a given degree, in descending order."""
        if degree < 0:
            return []
        keys = []
        for combo in combinations_with_replacement(range(self.nvars), degree):
            exps = [0] * self.nvars
            for i in combo:
                exps[i] += 1
            keys.append(self.monomial_key(exps))
        keys.sort(reverse=True)
        return keys

    # -- elements ---------------------------------------------------------
    def poly(self, terms=None) -> "Polynomial":
        """Build a polynomial from ``{exponent tuple: coefficient}``."""
        out = {}
        red = self.field
        for exps, c in (terms or {}).items():
            c = red(c)
            if not c:
                continue
            k = self.monomial_key(exps)
            v = red.reduce(out.get(k, 0) + c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial(self, out)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {0: c} if c else {})

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def gen(self, i: int) -> "Polynomial":
        return Polynomial(self, {self.var_keys[i]: self.field.one})

    @property
    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def linear_form(self, coeffs) -> "Polynomial":
        return sum((self.gen(i) * self.const(c) for i, c in enumerate(coeffs)), self.zero)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomial key -> coefficient."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- inspection -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        """(exponent tuple, coefficient) pairs in descending term order."""
        ring = self.ring
        return [(ring.exponents(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def degree(self) -> int:
        if not self.terms:
            return -1
        kd = self.ring.key_degree
        return max(kd(k) for k in self.terms)

    def is_homogeneous(self) -> bool:
        kd = self.ring.key_degree
        return len({kd(k) for k in self.terms}) <= 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def leading_key(self) -> int:
        return max(self.terms)

    def leading_coefficient(self):
        return self.terms[max(self.terms)]

    def coefficient(self, exps):
        return self.terms.get(self.ring.monomial_key(exps), self.ring.field.zero)

    def homogeneous_part(self, degree: int) -> "Polynomial":
        kd = self.ring.key_degree
        return Polynomial(self.ring, {k: c for k, c in self.terms.items() if kd(k) == degree})

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        red = self.ring.field.reduce
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = red(out.get(k, 0) + c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        red = self.ring.field.reduce
        return Polynomial(self.ring, {k: red(-c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero
        if self.degree() + other.degree() > MAX_EXPONENT:
            raise ExponentOverflow("product degree exceeds the exponent range")
        red = self.ring.field.reduce
        out = {}
        get = out.get
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return Polynomial(self.ring, {k: v for k, v in ((k, red(v)) for k, v in out.items()) if v})

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {k: f.reduce(v * c) for k, v in self.terms.items()})

    def shift(self, key: int, c=None) -> "Polynomial":
        """Multiply by the monomial ``key`` (and optionally a coefficient)."""
        if c is None:
            return Polynomial(self.ring, {k + key: v for k, v in self.terms.items()})
        red = self.ring.field.reduce
        return Polynomial(self.ring, {k + key: red(v * c) for k, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    def exact_divide(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def divmod(self, other: "Polynomial"):
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        ring = self.ring
        red = ring.field.reduce
        lk = max(other.terms)
        linv = ring.field.inv(other.terms[lk])
        rem = dict(self.terms)
        quot = {}
        out = {}
        while rem:
            k = max(rem)
            c = rem.pop(k)
            if not ring.divides(lk, k):
                out[k] = c
                continue
            q = red(c * linv)
            s = k - lk
            quot[s] = q
            for ok, oc in other.terms.items():
                if ok == lk:
                    continue
                t = ok + s
                v = red(rem.get(t, 0) - q * oc)
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Polynomial(ring, quot), Polynomial(ring, out)

    def diff(self, var: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``var``."""
        ring = self.ring
        red = ring.field.reduce
        vk = ring.var_keys[var]
        sh = WIDTH * var
        out = {}
        for k, c in self.terms.items():
            e = ((-k & ring.mask) >> sh) & 0xFFFF
            if e:
                v = red(c * e)
                if v:
                    out[k - vk] = v
        return Polynomial(ring, out)

    def gradient(self) -> tuple["Polynomial", ...]:
        return tuple(self.diff(i) for i in range(self.ring.nvars))

    def evaluate(self, point):
        f = self.ring.field
        pt = [f(v) for v in point]
        total = f.zero
        for exps, c in self.items():
            t = c
            for v, e in zip(pt, exps):
                if e:
                    t = t * v ** e
            total = f.reduce(total + t)
        return total

    def substitute(self, images) -> "Polynomial":
        """Replace variable i by ``images[i]`` (polynomials of the same ring)."""
        ring = self.ring
        cache = {}

        def power(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = images[i] ** e
            return cache[(i, e)]

        total = ring.zero
        for exps, c in self.items():
            t = ring.const(c)
            for i, e in enumerate(exps):
                if e:
                    t = t * power(i, e)
            total = total + t
        return total

    def linear_substitution(self, matrix) -> "Polynomial":
        """f(A v): variable i becomes ``sum_j matrix[i][j] * x_j``."""
        images = [self.ring.linear_form(row) for row in matrix]
        return self.substitute(images)

    # -- comparison / printing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.ring
        fmt = ring.field.format
        pieces = []
        for exps, c in self.items():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(ring.names, exps) if e
            )
            coeff = fmt(c)
            negative = coeff.startswith("-")
            if negative:
                coeff = coeff[1:]
            if not mono:
                body = coeff
            elif coeff == "1":
                body = mono
            else:
                body = f"{coeff}*{mono}"
            if not pieces:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append((" - " if negative else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({self})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    """Recursive descent over ``expr := term (('+'|'-') term)*``.

    term   := factor (('*'|'/') factor)*
    factor := ('+'|'-') factor | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | VARIABLE | '(' expr ')'

    Division is only allowed by nonzero constants, so rational coefficients
    printed as ``1/2*x`` parse back.
    """

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), start))
            else:
                ch = m.group(3)
                if ch.isspace():
                    pos = m.end()
                    continue
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", start)
                self.tokens.append(("op", ch, start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        p = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", pos)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in "*/":
                self.take()
                q = self.factor()
                if value == "*":
                    p = p * q
                else:
                    if not q.is_constant() or q.is_zero():
                        raise ParseError("division only by nonzero constants", pos)
                    f = self.ring.field
                    p = p.scale(f.inv(q.terms[0]))
            elif kind in ("int", "name") or (kind == "op" and value == "("):
                raise ParseError("implicit multiplication is not allowed", pos)
            else:
                return p

    def factor(self):
        kind, value, pos = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            p = self.factor()
            return -p if value == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            kind, value, epos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer literal", epos)
            e = int(value)
            if e > MAX_EXPONENT or (base.degree() > 0 and base.degree() * e > MAX_EXPONENT):
                raise ParseError(f"exponent overflow ({e})", epos)
            return base ** e
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "int":
            return self.ring.const(int(value))
        if kind == "name":
            if value not in self.ring.names:
                raise ParseError(f"unknown variable {value!r}", pos)
            return self.ring.gen(self.ring.names.index(value))
        if kind == "op" and value == "(":
            p = self.expr()
            kind, value, cpos = self.take()
            if (kind, value) != ("op", ")"):
                raise ParseError("expected ')'", cpos)
            return p
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {value!r}", pos)


def parse(text: str, nvars: int = 3, field: Field | str = QQ) -> Polynomial:
    return PolyRing(nvars, field).parse(text)


def euler_check(f: Polynomial) -> bool:
    """Check sum_u u * f_u == deg(f) * f exactly.

    Warns when the characteristic divides the degree, since the identity then
    holds trivially and says nothing about ``f``.
    """
    if not f.is_homogeneous():
        raise ValueError("Euler identity needs a homogeneous polynomial")
    ring = f.ring
    d = max(f.degree(), 0)
    p = ring.field.characteristic
    if p and d % p == 0 and f:
        warnings.warn(f"characteristic {p} divides the degree {d}", RuntimeWarning, stacklevel=2)
    lhs = sum((ring.gen(i) * f.diff(i) for i in range(ring.nvars)), ring.zero)
    return lhs == f.scale(d)
