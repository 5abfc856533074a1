"""Exact rational scalars and dense univariate polynomials.

Scalars are :class:`fractions.Fraction` values, which are always kept in
lowest terms with a positive denominator.  :class:`Poly` stores ascending
coefficients and is immutable.
"""
from __future__ import annotations

import math
import re
import sys
from fractions import Fraction
from typing import Iterable, Sequence, Union

# Sequence terms routinely exceed CPython's default 4300-digit str() limit.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Strings must be integers or ``a/b``; decimal and float notations are
    refused so that no rounding can sneak in.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if m is None:
            raise ValueError(f"not an exact rational: {value!r}")
        num, den = m.groups()
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator: {value!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def floor_rational(x: Fraction) -> int:
    # math.floor on Fraction rounds toward -inf
    return math.floor(x)


class _MinusInfinity:
    """Degree of the zero polynomial.  Orders below every integer, no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "-inf"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("_MinusInfinity")


MINUS_INFINITY = _MinusInfinity()


class Poly:
    """Dense polynomial in one variable over the rationals.

    ``coeffs[i]`` is the coefficient of ``n**i``.  Trailing zeros are
    stripped on construction, so the zero polynomial has no coefficients.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        c = [to_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def constant(cls, c: RationalLike) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: RationalLike = 1) -> "Poly":
        return cls([0] * degree + [c])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self):
        """Integer degree, or :data:`MINUS_INFINITY` for the zero polynomial."""
        return len(self._c) - 1 if self._c else MINUS_INFINITY

    @property
    def leading(self) -> Fraction:
        if not self._c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"Poly({[format_rational(c) for c in self._c]})"

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self, var: str = "n") -> str:
        if not self._c:
            return "0"
        parts = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = format_rational(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                if a == 1:
                    body = mono
                elif a.denominator == 1:
                    body = f"{a.numerator}*{mono}"
                else:
                    body = f"({format_rational(a)})*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self._c)

    def __add__(self, other) -> "Poly":
        return poly_add(self, _as_poly(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return poly_add(self, -_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return poly_add(_as_poly(other), -self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return poly_mul(self, _as_poly(other))

    __rmul__ = __mul__

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, to_rational(x))

    def scale(self, c: RationalLike) -> "Poly":
        c = to_rational(c)
        return Poly(c * x for x in self._c)

    def shift(self, c: RationalLike) -> "Poly":
        return poly_shift(self, to_rational(c))

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self._c) if i)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence[RationalLike]) -> "Poly":
        if isinstance(data, (str, bytes)) or not isinstance(data, Sequence):
            raise TypeError("polynomial must be an array of coefficients")
        return cls(data)


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly.constant(x)


def poly_add(a: Poly, b: Poly) -> Poly:
    ca, cb = a.coeffs, b.coeffs
    if len(ca) < len(cb):
        ca, cb = cb, ca
    out = list(ca)
    for i, c in enumerate(cb):
        out[i] += c
    return Poly(out)


def poly_mul(a: Poly, b: Poly) -> Poly:
    ca, cb = a.coeffs, b.coeffs
    if not ca or not cb:
        return Poly()
    out = [Fraction(0)] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        if x == 0:
            continue
        for j, y in enumerate(cb):
            out[i + j] += x * y
    return Poly(out)


def poly_prod(polys: Iterable[Poly]) -> Poly:
    out = Poly.constant(1)
    for p in polys:
        out = poly_mul(out, p)
    return out


def poly_shift(h: Poly, c: Fraction) -> Poly:
    """Return the polynomial ``n -> h(n + c)``."""
    c = to_rational(c)
    if c == 0 or len(h.coeffs) <= 1:
        return h
    # Horner in the polynomial ring: ((e_t)(n+c) + e_{t-1})(n+c) + ...
    base = Poly([c, 1])
    out = Poly()
    for e in reversed(h.coeffs):
        out = poly_add(poly_mul(out, base), Poly.constant(e))
    return out


def poly_eval(h: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for e in reversed(h.coeffs):
        acc = acc * x + e
    return acc


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    db = len(b.coeffs) - 1
    lead = b.leading
    if len(rem) - 1 < db:
        return Poly(), a
    quot = [Fraction(0)] * (len(rem) - db)
    for i in range(len(rem) - 1 - db, -1, -1):
        q = rem[i + db] / lead
        quot[i] = q
        if q:
            for j, c in enumerate(b.coeffs):
                rem[i + j] -= q * c
    return Poly(quot), Poly(rem[:db])


def l_bound(h: Poly) -> Fraction:
    """Sum of magnitudes of the negative non-leading coefficients of ``h``.

    For ``h`` with positive leading coefficient ``e_t`` this gives
    ``h(n) >= n**(t-1) * (e_t*n - l_bound(h))`` for ``n >= 1``.
    """
    if h.is_zero():
        raise ValueError("L undefined for zero polynomial")
    return sum((-e for e in h.coeffs[:-1] if e < 0), Fraction(0))


def integer_content_form(polys: Sequence[Poly]) -> tuple[list[list[int]], int]:
    """Scale ``polys`` by one positive integer so every coefficient is integral.

    Returns the integer coefficient lists and the scale factor.
    """
    scale = 1
    for p in polys:
        for c in p.coeffs:
            scale = math.lcm(scale, c.denominator)
    return [[int(c * scale) for c in p.coeffs] for p in polys], scale
