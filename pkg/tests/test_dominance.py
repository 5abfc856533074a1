import cmath

from holopos.dominance import aberth_roots, dominance_report
from holopos.exactmath import Poly
from holopos.recurrence import normalize
from holopos.spectrum import CharPoly, char_poly

from conftest import spec_of


def test_franel_unique_at_32():
    rep = dominance_report(char_poly(normalize(spec_of("franel"))))
    assert rep.unique_dominant and rep.converged
    assert abs(rep.dominant_modulus - 32) < 1e-9


def test_a105641_unique():
    rep = dominance_report(char_poly(normalize(spec_of("a105641"))))
    assert rep.unique_dominant
    assert abs(rep.dominant_modulus - 3.38298) < 1e-5


def test_grz_unique():
    rep = dominance_report(char_poly(normalize(spec_of("grz4"))))
    assert rep.unique_dominant
    assert abs(rep.dominant_modulus - 129.99) < 0.01


def test_symmetric_pair_not_unique():
    rep = dominance_report(CharPoly(Poly([-1, 0, 1])))
    assert not rep.unique_dominant


def test_negative_dominant_not_unique():
    # roots -3 and 1
    rep = dominance_report(CharPoly(Poly([-3, 2, 1])))
    assert not rep.unique_dominant


def test_complex_pair_outside_not_unique():
    # (t - 1)(t^2 + 4)
    rep = dominance_report(CharPoly(Poly([-4, 4, -1, 1])))
    assert not rep.unique_dominant


def test_margin_is_configurable():
    cp = CharPoly(Poly([-2, -1, 1]))  # roots 2, -1
    assert dominance_report(cp).unique_dominant
    assert not dominance_report(cp, margin=2.0).unique_dominant


def test_iteration_cap_reports_nonconvergence():
    cp = char_poly(normalize(spec_of("a105641")))
    rep = dominance_report(cp, max_iter=1)
    assert not rep.converged and not rep.unique_dominant
    assert rep.diagnostic


def test_residuals_small():
    coeffs = [complex(c) for c in Poly([32, -353, -21, 1]).coeffs]
    roots, _, _ = aberth_roots(coeffs)
    for z in roots:
        val = sum(c * z**i for i, c in enumerate(coeffs))
        assert abs(val) < 1e-9 * max(1, abs(z)) ** 3
    assert any(cmath.isclose(z, 32) for z in roots)


def test_report_marks_itself_non_certifying():
    rep = dominance_report(CharPoly(Poly([-2, 1])))
    assert rep.to_json()["certifying"] is False
