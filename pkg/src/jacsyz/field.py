"""Exact coefficient fields.

Coefficients are stored as bare values for speed: ``gmpy2.mpq`` for the
rationals and plain ``int`` residues in ``[0, p)`` for prime fields.  The
field object knows how to build, reduce, invert and print them.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq

DEFAULT_PRIME = 32003


class Field:
    characteristic: int = 0

    def __call__(self, value):
        raise NotImplementedError

    def reduce(self, value):
        return value

    def inv(self, value):
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)


class RationalField(Field):
    """The field of rational numbers, elements kept in lowest terms by gmpy2."""

    characteristic = 0

    def __call__(self, value):
        if isinstance(value, str):
            return mpq(Fraction(value))
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)

    def inv(self, value):
        if not value:
            raise ZeroDivisionError("inverse of zero")
        return 1 / value

    def format(self, value) -> str:
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    @property
    def descriptor(self) -> str:
        return "q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    """Residues modulo a prime ``p``, represented as ints in ``[0, p)``."""

    def __init__(self, p: int = DEFAULT_PRIME):
        p = int(p)
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not a prime")
        self.p = p
        self.characteristic = p

    def __call__(self, value):
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, (Fraction, type(mpq(0)))):
            num, den = int(value.numerator), int(value.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def reduce(self, value):
        return value % self.p

    def inv(self, value):
        if value % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(value, -1, self.p)

    def format(self, value) -> str:
        # symmetric representative, so -3 prints as -3 rather than p - 3
        return str(value - self.p if value > self.p // 2 else value)

    @property
    def descriptor(self) -> str:
        return f"p:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_descriptor(text) -> Field:
    """Parse ``"q"``, ``0``, ``"p:32003"`` or a bare prime into a field."""
    if isinstance(text, Field):
        return text
    if isinstance(text, int):
        return QQ if text == 0 else PrimeField(text)
    text = str(text).strip().lower()
    if text in ("q", "qq", "0", "rational", "rationals"):
        return QQ
    if text.startswith("p:"):
        text = text[2:]
    try:
        return PrimeField(int(text))
    except ValueError as exc:
        raise ValueError(f"unknown field descriptor {text!r}") from exc
