"""Exact scalar arithmetic over GF(p) and the rationals.

Scalars are kept as raw Python values in the hot loops (``int`` residues for
GF(p), ``Fraction`` for Q).  :class:`Scalar` wraps a raw value together with
its field for the public arithmetic API.
"""

import random
import re
from dataclasses import dataclass
from fractions import Fraction


class FieldError(ArithmeticError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class FieldMismatch(FieldError):
    pass


class CharTwo(FieldError):
    """Raised when 1/2 is requested in characteristic 2."""


def _is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p) when ``p`` is a prime, the rationals when ``p == 0``."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            if not _is_prime(self.p):
                raise ValueError(f"GF({self.p}): {self.p} is not prime")
            if self.p >= 2**31:
                raise ValueError("prime fields are limited to p < 2^31")

    @property
    def characteristic(self):
        return self.p

    @property
    def is_prime_field(self):
        return self.p != 0

    def __str__(self):
        return f"GF({self.p})" if self.p else "Q"

    @property
    def tag(self):
        return f"gf{self.p}" if self.p else "rat"

    # raw-value arithmetic; all results are canonical
    def __call__(self, x):
        """Coerce an int, Fraction or numeric string into canonical form."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p:
            if isinstance(x, Fraction):
                num = x.numerator % self.p
                den = x.denominator % self.p
                if den == 0:
                    raise DivisionByZero(f"denominator of {x} vanishes in {self}")
                return num * pow(den, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def zero(self):
        return 0 if self.p else Fraction(0)

    def one(self):
        return 1 if self.p else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def neg(self, a):
        return -a % self.p if self.p else -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inv(a), -k)
        return pow(a, k, self.p) if self.p else a**k

    def random(self, rng, nonzero=False):
        """Random element; over Q a small signed fraction."""
        while True:
            if self.p:
                x = rng.randrange(self.p)
            else:
                x = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            if not (nonzero and x == 0):
                return x

    def elements(self):
        if not self.p:
            raise ValueError("Q is infinite")
        return range(self.p)

    def fmt(self, a):
        return str(a)


GF2 = FieldSpec(2)
GF3 = FieldSpec(3)
QQ = FieldSpec(0)


def GF(p):
    return FieldSpec(p)


_FIELD_RE = re.compile(r"^(?:gf(?P<p1>\d+)|gfp:(?P<p2>\d+)|gf\((?P<p3>\d+)\)|(?P<q>rat|q|qq|rationals))$")


def parse_field(text):
    """Parse ``gf2``, ``gf3``, ``gfP:<p>``, ``GF(p)``, ``rat`` or ``Q``."""
    m = _FIELD_RE.match(text.strip().lower())
    if not m:
        raise ValueError(f"unknown field {text!r}")
    if m.group("q"):
        return QQ
    return FieldSpec(int(m.group("p1") or m.group("p2") or m.group("p3")))


class Scalar:
    """An immutable field element with a canonical raw value."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", field(value))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _other(self, b):
        if isinstance(b, Scalar):
            if b.field != self.field:
                raise FieldMismatch(f"{self.field} vs {b.field}")
            return b.value
        return self.field(b)

    def _wrap(self, v):
        return Scalar(self.field, v)

    def __add__(self, b):
        return self._wrap(self.field.add(self.value, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return self._wrap(self.field.sub(self.value, self._other(b)))

    def __rsub__(self, b):
        return self._wrap(self.field.sub(self._other(b), self.value))

    def __mul__(self, b):
        return self._wrap(self.field.mul(self.value, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return self._wrap(self.field.div(self.value, self._other(b)))

    def __rtruediv__(self, b):
        return self._wrap(self.field.div(self._other(b), self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, k):
        return self._wrap(self.field.pow(self.value, k))

    def inv(self):
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, b):
        if isinstance(b, Scalar):
            return self.field == b.field and self.value == b.value
        try:
            return self.value == self.field(b)
        except (TypeError, ValueError, FieldError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Scalar({self.field}, {self.value})"

    def __str__(self):
        return str(self.value)


def scalar_arith(op, a, b=None):
    """Dispatch ``op`` in {add, sub, mul, div, neg, inv} on Scalars."""
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if b is None:
        raise TypeError(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def half(field):
    """The inverse of 1 + 1; raises CharTwo in characteristic 2."""
    if field.characteristic == 2:
        raise CharTwo("1/2 does not exist in characteristic 2")
    return Scalar(field, field.inv(field(2)))


def rng_for(seed):
    return random.Random(seed)
