"""Exact scalar arithmetic over the rationals and prime fields GF(p).

Scalars are plain Python values so that dense kernels stay cheap:

* over Q a scalar is an ``int`` when integral and a ``fractions.Fraction``
  otherwise (Fraction already keeps lowest terms with a positive
  denominator);
* over GF(p) a scalar is an ``int`` residue in ``[0, p)``.

The :class:`Field` descriptor carries the arithmetic.  Matrices keep a
reference to their field, so a residue never travels without its modulus.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, ParseError, UnorderedField

RATIONALS = "Rationals"
PRIME_FIELD = "PrimeField"


def is_prime(m: int) -> bool:
    """Trial division; moduli here are tiny."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def _canon_q(x):
    if isinstance(x, int):
        return x
    if x.denominator == 1:
        return x.numerator
    return x


class Field:
    """Descriptor for Q (``modulus == 0``) or GF(p).

    Instances are immutable and compare by ``(kind, modulus)``.
    """

    __slots__ = ("kind", "modulus")

    def __init__(self, modulus: int = 0):
        if modulus == 0:
            kind = RATIONALS
        else:
            if not is_prime(modulus):
                raise ValueError(f"modulus {modulus} is not prime")
            kind = PRIME_FIELD
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    def __eq__(self, other):
        return isinstance(other, Field) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Field", self.modulus))

    def __repr__(self):
        return "Q" if self.is_rational else f"GF({self.modulus})"

    def __reduce__(self):
        return (Field, (self.modulus,))

    @property
    def is_rational(self) -> bool:
        return self.modulus == 0

    @property
    def characteristic(self) -> int:
        return self.modulus

    zero = 0
    one = 1

    # -- construction -------------------------------------------------

    def coerce(self, x):
        """Map an int / Fraction / residue into canonical form."""
        p = self.modulus
        if p == 0:
            if isinstance(x, bool):
                return int(x)
            if isinstance(x, int):
                return x
            if isinstance(x, Fraction):
                return _canon_q(x)
            if isinstance(x, str):
                return self.parse(x)
            return _canon_q(Fraction(x))
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise DivisionByZero(f"{x} has no image in GF({p})")
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, str):
            return self.parse(x)
        return int(x) % p

    def parse(self, text: str):
        """Parse ``a``, ``-a`` or ``a/b`` into a canonical scalar."""
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                value = Fraction(int(num), int(den))
            else:
                value = int(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse scalar {text!r}") from exc
        return self.coerce(value)

    def render(self, x) -> str:
        if self.modulus == 0:
            x = _canon_q(x)
            if isinstance(x, int):
                return str(x)
            return f"{x.numerator}/{x.denominator}"
        return str(x % self.modulus)

    # -- arithmetic -----------------------------------------------------

    def add(self, x, y):
        if self.modulus:
            return (x + y) % self.modulus
        return _canon_q(x + y)

    def sub(self, x, y):
        if self.modulus:
            return (x - y) % self.modulus
        return _canon_q(x - y)

    def neg(self, x):
        if self.modulus:
            return -x % self.modulus
        return -x

    def mul(self, x, y):
        if self.modulus:
            return x * y % self.modulus
        return _canon_q(x * y)

    def invert(self, x):
        if x == 0:
            raise DivisionByZero("zero has no inverse")
        if self.modulus:
            return pow(x, -1, self.modulus)
        return _canon_q(Fraction(1) / x)

    def div(self, x, y):
        if y == 0:
            raise DivisionByZero("division by zero")
        if self.modulus:
            return x * pow(y, -1, self.modulus) % self.modulus
        return _canon_q(Fraction(x) / y)

    def reduce(self, x):
        """Canonicalise the result of raw int/Fraction arithmetic."""
        if self.modulus:
            return x % self.modulus
        return _canon_q(x)

    def power(self, x, k: int):
        if k < 0:
            return self.power(self.invert(x), -k)
        if self.modulus:
            return pow(x, k, self.modulus)
        return _canon_q(Fraction(x) ** k)

    # -- order (Q only) -------------------------------------------------

    def sign(self, x) -> int:
        if self.modulus:
            raise UnorderedField(f"GF({self.modulus}) is not ordered")
        return (x > 0) - (x < 0)

    def is_square(self, x) -> bool:
        """Whether ``x`` is a square in the field."""
        if self.modulus:
            x %= self.modulus
            if x == 0 or self.modulus == 2:
                return True
            return pow(x, (self.modulus - 1) // 2, self.modulus) == 1
        x = Fraction(x)
        if x < 0:
            return False
        return _is_square_int(x.numerator) and _is_square_int(x.denominator)

    def elements(self):
        """All elements; only meaningful for GF(p)."""
        if self.modulus == 0:
            raise ValueError("Q is infinite")
        return range(self.modulus)


def _is_square_int(m: int) -> bool:
    r = math.isqrt(m)
    return r * r == m


Q = Field(0)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def field_from_token(token: str) -> Field:
    """``"Q"`` -> Q, ``"<prime>"`` -> GF(prime)."""
    token = token.strip()
    if token in ("Q", "q", "QQ"):
        return Q
    try:
        p = int(token)
    except ValueError as exc:
        raise ParseError(f"unknown field {token!r}") from exc
    if not is_prime(p):
        raise ParseError(f"field modulus {p} is not prime")
    return GF(p)


def invert(x, field: Field = Q):
    return field.invert(field.coerce(x))


def sign_of(x, field: Field = Q) -> int:
    return field.sign(field.coerce(x))
