"""Characteristic polynomial and certified isolation of its positive roots."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import Poly, poly_divmod, poly_eval, to_rational
from .recurrence import NormalizedRecurrence


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial in ``t``."""

    poly: Poly

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __call__(self, t) -> Fraction:
        return poly_eval(self.poly, to_rational(t))


@dataclass(frozen=True)
class RootInterval:
    """Open interval ``(lo, hi)`` holding exactly one root.

    ``lo == hi`` marks a root known exactly.
    """

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = to_rational(x)
        if self.exact:
            return x == self.lo
        return self.lo < x < self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def char_poly(nr: NormalizedRecurrence) -> CharPoly:
    d = nr.order
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    for j in range(1, d + 1):
        ratio = nr.limit_numerator(j) / nr.limit_denominator(j)
        coeffs[d - j] = -nr.signs[j - 1] * ratio
    return CharPoly(Poly(coeffs))


def _monic(p: Poly) -> Poly:
    return p.scale(1 / p.leading)


def _gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return _monic(a)


def squarefree_part(p: Poly) -> Poly:
    g = _gcd(p, p.derivative())
    return _monic(poly_divmod(p, g)[0])


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        rem = poly_divmod(seq[-2], seq[-1])[1]
        if rem.is_zero():
            break
        seq.append(-rem)
    return seq


def _sign_changes(seq: list[Poly], x: Fraction) -> int:
    count = 0
    prev = 0
    for q in seq:
        v = poly_eval(q, x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if prev and s != prev:
            count += 1
        prev = s
    return count


def cauchy_bound(p: Poly) -> Fraction:
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def _strip_zero_root(p: Poly) -> Poly:
    c = p.coeffs
    m = 0
    while m < len(c) and c[m] == 0:
        m += 1
    return Poly(c[m:])


def _positive_core(cp: CharPoly | Poly) -> Poly:
    p = cp.poly if isinstance(cp, CharPoly) else cp
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    return _strip_zero_root(squarefree_part(p))


def count_roots(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``."""
    seq = sturm_sequence(squarefree_part(p))
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def isolate_positive_roots(cp: CharPoly | Poly) -> list[RootInterval]:
    """Disjoint isolating intervals for every distinct positive real root, ascending."""
    core = _positive_core(cp)
    if core.degree < 1:
        return []
    seq = sturm_sequence(core)
    out: list[RootInterval] = []
    zero = Fraction(0)
    top = cauchy_bound(core)
    stack = [(zero, top, _sign_changes(seq, zero), _sign_changes(seq, top))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1 and poly_eval(core, lo) != 0 and poly_eval(core, hi) != 0:
            out.append(RootInterval(lo, hi))
            continue
        mid = (lo + hi) / 2
        vmid = _sign_changes(seq, mid)
        if poly_eval(core, mid) == 0:
            out.append(RootInterval(mid, mid))
            # (lo, mid) holds the roots of (lo, mid] other than mid itself
            stack.append((lo, mid, vlo, vmid + 1))
            stack.append((mid, hi, vmid, vhi))
        else:
            stack.append((lo, mid, vlo, vmid))
            stack.append((mid, hi, vmid, vhi))
    return sorted(out, key=lambda iv: iv.lo)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval ``(lo, hi)``."""
    if lo >= hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # (lo, hi) sits inside [fl, fl + 1]; write x = fl + 1/y
    a = 1 / (hi - fl)
    if lo == fl:
        y = Fraction(a.numerator // a.denominator + 1)
    else:
        y = simplest_between(a, 1 / (lo - fl))
    return fl + 1 / y


def refine(cp: CharPoly | Poly, iv: RootInterval, width) -> RootInterval:
    """Shrink ``iv`` to width at most ``width`` around the same root.

    Each step first tests the simplest rational inside the interval, so a
    rational root is eventually hit exactly and returned as ``lo == hi``.
    """
    width = to_rational(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if iv.exact:
        return iv
    core = squarefree_part(cp.poly if isinstance(cp, CharPoly) else cp)
    lo, hi = iv.lo, iv.hi
    slo = _sgn(poly_eval(core, lo))
    if slo == 0 or _sgn(poly_eval(core, hi)) == 0 or slo == _sgn(poly_eval(core, hi)):
        raise ValueError("interval does not bracket a sign change")
    while hi - lo > width:
        s = simplest_between(lo, hi)
        if poly_eval(core, s) == 0:
            return RootInterval(s, s)
        mid = (lo + hi) / 2
        v = _sgn(poly_eval(core, mid))
        if v == 0:
            return RootInterval(mid, mid)
        if v == slo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)


def _sgn(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def dominant_positive_interval(cp: CharPoly) -> RootInterval:
    """Isolating interval of the largest positive real root."""
    roots = isolate_positive_roots(cp)
    if not roots:
        raise ValueError("characteristic polynomial has no positive real root")
    return roots[-1]
