"""Arithmetic in small binary fields GF(2^n), 2 <= n <= 8.

Elements are plain ints whose bit i is the coefficient of x^i.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass, field

MIN_WIDTH = 2
MAX_WIDTH = 8

GF4_POLY = 0b111    # x^2 + x + 1
GF8_POLY = 0b1011   # x^3 + x + 1


class FieldError(ValueError):
    """Invalid field definition or element."""


class ReduciblePolynomialError(FieldError):
    pass


class FieldWidthError(FieldError):
    pass


def _poly_mod(a: int, m: int) -> int:
    """Remainder of carry-less division a mod m over GF(2)."""
    dm = m.bit_length()
    while a and a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, cand) == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^width) defined by an irreducible ``reduction_poly``.

    >>> f = FieldSpec(3, 0b1011)
    >>> f.mul(3, 4)
    7
    """

    width: int
    reduction_poly: int
    _mul_table: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.width, int) or not MIN_WIDTH <= self.width <= MAX_WIDTH:
            raise FieldWidthError(
                f"field width must be in [{MIN_WIDTH}, {MAX_WIDTH}], got {self.width!r}")
        if self.reduction_poly.bit_length() != self.width + 1:
            raise FieldError(
                f"reduction polynomial {self.reduction_poly:#b} does not have degree {self.width}")
        if not is_irreducible(self.reduction_poly):
            raise ReduciblePolynomialError(
                f"polynomial {self.reduction_poly:#b} is reducible over GF(2)")
        size = 1 << self.width
        table = tuple(
            tuple(field_multiply(self, a, b) for b in range(size)) for a in range(size))
        object.__setattr__(self, "_mul_table", table)

    @property
    def order(self) -> int:
        return 1 << self.width

    @property
    def mask(self) -> int:
        return (1 << self.width) - 1

    def check(self, a: int) -> int:
        if not isinstance(a, numbers.Integral) or not 0 <= a <= self.mask:
            raise FieldError(f"{a!r} is not an element of GF(2^{self.width})")
        return int(a)

    def mul(self, a: int, b: int) -> int:
        """Table lookup; same result as :func:`field_multiply`."""
        return self._mul_table[a][b]

    def elements(self) -> range:
        return range(self.order)


def add(f: FieldSpec, a: int, b: int) -> int:
    """Field addition (and subtraction): bitwise xor."""
    return f.check(a) ^ f.check(b)


def x_multiply(f: FieldSpec, a: int) -> int:
    """Multiply by the element x: shift left, reduce if the top bit spills."""
    a = f.check(a) << 1
    if a >> f.width:
        a ^= f.reduction_poly
    return a


def field_multiply(f: FieldSpec, a: int, b: int) -> int:
    """Shift-and-add product: sum of a*x^i over the set bits i of b."""
    f.check(a)
    f.check(b)
    ret = 0
    xmultiple = a
    for _ in range(f.width):
        if b & 1:
            ret ^= xmultiple
        b >>= 1
        xmultiple = x_multiply(f, xmultiple)
    return ret


def inverse(f: FieldSpec, a: int) -> int:
    """Multiplicative inverse by exhaustive search over the nonzero elements."""
    if f.check(a) == 0:
        raise ZeroDivisionError("0 has no inverse in a field")
    for b in range(1, f.order):
        if f.mul(a, b) == 1:
            return b
    raise AssertionError("unreachable: field without inverse")  # pragma: no cover


@dataclass(frozen=True)
class FieldElement:
    """An element bound to its field, for operator-style arithmetic.

    Mixing elements of different fields raises :class:`FieldError`.
    """

    field: FieldSpec
    value: int

    def __post_init__(self):
        self.field.check(self.value)

    def _other(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldError(f"mismatched fields: {self.field} vs {other.field}")
        return other.value

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, add(self.field, self.value, v))

    __sub__ = __add__

    def __mul__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, field_multiply(self.field, self.value, v))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, inverse(self.field, self.value))

    def __int__(self):
        return self.value


GF4 = FieldSpec(2, GF4_POLY)
GF8 = FieldSpec(3, GF8_POLY)
