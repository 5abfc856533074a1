from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holopos.exactmath import (
    MINUS_INFINITY,
    Poly,
    floor_rational,
    format_rational,
    integer_content_form,
    l_bound,
    poly_add,
    poly_divmod,
    poly_eval,
    poly_mul,
    poly_shift,
    to_rational,
)

N = Poly([0, 1])
Q11 = Poly([336, -2562, 8193, -13957, 13128, -6237, 1155])

ints = st.integers(-10**6, 10**6)
rats = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10**6)
polys = st.lists(rats, max_size=9).map(Poly)


def test_add_cancellation():
    assert poly_add(N + 1, N - 1) == Poly([0, 2])


def test_add_identity():
    assert poly_add(Q11, Poly()) == Q11


def test_add_annihilation_is_canonical_zero():
    z = poly_add(Poly([0, 0, 1]), Poly([0, 0, -1]))
    assert z.coeffs == () and z.is_zero() and z.degree is MINUS_INFINITY


def test_mul_examples():
    assert poly_mul(N + 1, N - 1) == Poly([-1, 0, 1])
    assert poly_mul(Q11, Poly()).is_zero()
    quartic = Poly([0, 0, 0, 0, 1])
    assert poly_mul(Poly([160, -187, 55]), quartic) == Poly([0, 0, 0, 0, 160, -187, 55])


def test_shift_examples():
    assert poly_shift(Poly([0, 0, 1]), Fraction(1)) == Poly([1, 2, 1])
    assert poly_shift(Q11, Fraction(0)) == Q11
    assert poly_shift(N - 2, Fraction(1)) == N - 1


def test_eval_examples():
    cp = Poly([32, -353, -21, 1])
    assert poly_eval(cp, Fraction(32)) == 0
    assert poly_eval(Poly(), Fraction(7, 3)) == 0
    assert poly_eval(N + 2, Fraction(1)) == 3


def test_l_bound_examples():
    assert l_bound(Poly([1, 0, 1])) == 0
    assert l_bound(N - 3) == 3
    assert l_bound(Q11) == 22756 == 6237 + 13957 + 2562


def test_l_bound_ignores_leading_and_constants():
    assert l_bound(Poly([-5])) == 0
    assert l_bound(Poly([0, -1])) == 0


def test_l_bound_zero_raises():
    with pytest.raises(ValueError, match="L undefined for zero polynomial"):
        l_bound(Poly())


def test_zero_degree_is_not_a_number():
    d = Poly().degree
    assert d is MINUS_INFINITY
    assert d < 0 and not isinstance(d, int)
    with pytest.raises(TypeError):
        d + 1


def test_rational_parsing():
    assert to_rational("7/2") == Fraction(7, 2)
    assert to_rational(" -4 ") == -4
    assert to_rational("6/4") == Fraction(3, 2)
    for bad in ("0.5", "1e3", "1/0", "", "a/b", 1.5):
        with pytest.raises((ValueError, TypeError)):
            to_rational(bad)
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(Fraction(8, 4)) == "2"


def test_floor_is_toward_minus_infinity():
    assert floor_rational(Fraction(-1, 2)) == -1
    assert floor_rational(Fraction(7, 2)) == 3
    assert floor_rational(Fraction(4)) == 4


def test_divmod_and_derivative():
    a = Poly([-1, 0, 0, 1])
    qt, rem = poly_divmod(a, N - 1)
    assert qt == Poly([1, 1, 1]) and rem.is_zero()
    assert a.derivative() == Poly([0, 0, 3])
    with pytest.raises(ZeroDivisionError):
        poly_divmod(a, Poly())


def test_json_round_trip_and_pretty():
    h = Poly(["1/2", "-3", "0", "5"])
    assert Poly.from_json(h.to_json()) == h
    assert h.pretty() == "5*n^3 - 3*n + 1/2"


def test_integer_content_form():
    ints_, scale = integer_content_form([Poly(["1/2", "1/3"]), Poly([2])])
    assert scale == 6
    assert ints_ == [[3, 2], [12]]


@given(polys, rats.filter(lambda c: c > 0))
def test_l_bound_scales(h, c):
    if h.is_zero():
        return
    assert l_bound(h.scale(c)) == c * l_bound(h)


@given(polys)
def test_l_bound_zero_characterization(h):
    if h.is_zero():
        return
    assert (l_bound(h) == 0) == all(c >= 0 for c in h.coeffs[:-1])


@settings(max_examples=300)
@given(st.lists(ints, min_size=1, max_size=9), st.integers(1, 10**6), st.integers(1, 50))
def test_positive_past_l_bound(coeffs, lead, extra):
    h = Poly(coeffs + [lead])
    start = floor_rational(l_bound(h) / h.leading) + 1
    for m in (start, start + extra):
        assert m * h.leading > l_bound(h)
        assert poly_eval(h, Fraction(m)) > 0


@given(polys, rats)
def test_shift_round_trip(h, c):
    assert poly_shift(poly_shift(h, Fraction(1)), Fraction(-1)) == h
    assert poly_shift(poly_shift(h, c), -c) == h


@given(polys, polys, rats)
def test_ring_laws_and_canonical_form(a, b, x):
    for out in (a + b, a * b, poly_shift(a, x)):
        assert not out.coeffs or out.coeffs[-1] != 0
        assert all(isinstance(c, Fraction) and c.denominator > 0 for c in out.coeffs)
    assert poly_eval(a * b, x) == poly_eval(a, x) * poly_eval(b, x)
    assert poly_eval(a + b, x) == poly_eval(a, x) + poly_eval(b, x)
    if not a.is_zero() and not b.is_zero():
        assert (a * b).degree == a.degree + b.degree
