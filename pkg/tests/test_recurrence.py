import json
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holopos.exactmath import Poly, poly_eval
from holopos.recurrence import (
    DEGREE_RELAXED,
    ZERO_NUMERATOR,
    NormalizationError,
    SpecError,
    TermGenerator,
    dump_spec,
    ensure_well_defined,
    iter_terms,
    normalize,
    parse_spec,
    term,
    validate_denominators,
)
from holopos.schemas import load_schema

from conftest import ALL, DATA, spec_of
from oracles import franel5, grz4, hill_free_uudd, raw


def doc(**over):
    base = {
        "name": "toy",
        "order": 1,
        "recurrence_start": 1,
        "claim_start": 0,
        "numerators": [["2", "2"]],
        "denominators": [["1", "1"]],
        "initial_terms": {"0": "1"},
    }
    base.update(over)
    return base


def test_parse_franel():
    s = spec_of("franel")
    assert (s.order, s.recurrence_start, s.claim_start) == (3, 3, 0)
    assert [s.initial_terms[i] for i in range(3)] == [1, 2, 34]


def test_parse_grz():
    s = spec_of("grz4")
    assert (s.order, s.recurrence_start, s.claim_start) == (4, 4, 2)
    assert [s.initial_terms[i] for i in range(4)] == [1, 0, 216, 18816]


def test_parse_a105641():
    s = spec_of("a105641")
    assert (s.order, s.recurrence_start, s.claim_start) == (6, 8, 3)
    assert [s.initial_terms[i] for i in range(2, 8)] == [0, 1, 2, 5, 14, 39]


def test_missing_initial_term_named():
    with pytest.raises(SpecError, match=r"missing initial term a_0") as exc:
        parse_spec(doc(initial_terms={}))
    assert exc.value.field == "initial_terms"


@pytest.mark.parametrize(
    "over, field",
    [
        ({"order": 0}, "order"),
        ({"denominators": [[]]}, "denominators[0]"),
        ({"denominators": [["0", "0"]]}, "denominators[0]"),
        ({"numerators": [["0.5"]]}, "numerators[0]"),
        ({"initial_terms": {"0": "1", "5": "2"}}, "initial_terms"),
        ({"claim_start": -3}, "claim_start"),
        ({"numerators": [["1"], ["2"]]}, "numerators"),
        ({"order": "1"}, "order"),
    ],
)
def test_field_level_diagnostics(over, field):
    with pytest.raises(SpecError) as exc:
        parse_spec(doc(**over))
    assert exc.value.field == field


def test_malformed_json():
    with pytest.raises(SpecError, match="malformed JSON"):
        parse_spec("{not json")
    with pytest.raises(SpecError):
        parse_spec("[1, 2]")


def test_fixtures_match_schema(fixture_name):
    jsonschema.validate(raw(fixture_name), load_schema("spec"))


def test_round_trip(fixture_name):
    s = spec_of(fixture_name)
    again = parse_spec(dump_spec(s))
    assert again == s
    assert json.loads(dump_spec(again)) == s.to_json()


def test_normalize_franel_signs():
    nr = normalize(spec_of("franel"))
    assert nr.signs == (1, 1, -1) and nr.k == 6
    assert nr.relaxations == ()


def test_normalize_grz_signs():
    assert normalize(spec_of("grz4")).signs == (1, -1, -1, -1)


def test_double_sign_flip():
    nr = normalize(parse_spec(doc(numerators=[["-2", "-2"]], denominators=[["-1", "-1"]])))
    assert nr.signs == (1,)
    assert nr.q_polys[0] == Poly([2, 2])
    assert nr.den_polys[0] == Poly([1, 1])


def test_numerator_dominates():
    with pytest.raises(NormalizationError, match="numerator dominates denominator"):
        normalize(parse_spec(doc(numerators=[["0", "0", "1"]])))


def test_unequal_denominator_degrees_rejected():
    d = doc(
        order=2, recurrence_start=2,
        numerators=[["1", "1"], ["1"]], denominators=[["1", "1"], ["1"]],
        initial_terms={"0": "1", "1": "1"},
    )
    with pytest.raises(NormalizationError, match="below common degree"):
        normalize(parse_spec(d))


def test_relaxations_and_strict():
    d = doc(
        order=2, recurrence_start=2,
        numerators=[["1", "1"], ["1"]], denominators=[["1", "1"], ["2", "1"]],
        initial_terms={"0": "1", "1": "1"},
    )
    nr = normalize(parse_spec(d))
    assert nr.relaxations == (DEGREE_RELAXED,)
    assert nr.limit_numerator(2) == 0
    with pytest.raises(NormalizationError, match="degree mismatch with strict mode"):
        normalize(parse_spec(d), strict=True)
    d["numerators"][1] = []
    nr = normalize(parse_spec(d))
    assert nr.signs == (1, 0) and nr.q_polys[1].is_zero()
    assert nr.relaxations == (ZERO_NUMERATOR,)
    with pytest.raises(NormalizationError):
        normalize(parse_spec(d), strict=True)


def test_reference_fixtures_pass_strict(reference_name):
    normalize(spec_of(reference_name), strict=True)


def test_normalize_idempotent(fixture_name):
    nr = normalize(spec_of(fixture_name))
    again = normalize(nr.as_spec())
    assert (again.signs, again.q_polys, again.den_polys, again.k) == (
        nr.signs, nr.q_polys, nr.den_polys, nr.k
    )


def test_sign_identity(fixture_name):
    spec = spec_of(fixture_name)
    nr = normalize(spec)
    for j in range(spec.order):
        for m in range(spec.recurrence_start, spec.recurrence_start + 20):
            x = Fraction(m)
            orig = poly_eval(spec.numerators[j], x) / poly_eval(spec.denominators[j], x)
            assert nr.coefficient(j + 1, m) == orig


def test_validate_franel_denominators():
    assert validate_denominators(normalize(spec_of("franel"))) == []


def test_validate_finds_integer_root():
    nr = normalize(parse_spec(doc(recurrence_start=3, claim_start=2, initial_terms={"2": "1"}, denominators=[["-10", "1"]])))
    assert validate_denominators(nr) == [10]
    with pytest.raises(NormalizationError, match=r"\[10\]"):
        ensure_well_defined(nr)


def test_validate_no_integer_roots():
    nr = normalize(parse_spec(doc(denominators=[["1", "0", "1"]], numerators=[["1"]])))
    assert validate_denominators(nr) == []


def test_validate_ignores_roots_before_start():
    nr = normalize(parse_spec(doc(recurrence_start=5, claim_start=4, initial_terms={"4": "1"}, denominators=[["-3", "1"]])))
    assert validate_denominators(nr) == []


def test_franel_terms():
    nr = normalize(spec_of("franel"))
    assert term(nr, 2) == 34
    assert term(nr, 3) == 488
    assert all(term(nr, m) == franel5(m) for m in range(201))


def test_grz_terms():
    nr = normalize(spec_of("grz4"))
    assert all(term(nr, m) == grz4(m) for m in range(120))


def test_a105641_terms():
    nr = normalize(spec_of("a105641"))
    assert term(nr, 7) == 39
    assert all(term(nr, m) == hill_free_uudd(m) for m in range(2, 60))


def test_term_below_first_index():
    nr = normalize(spec_of("a105641"))
    with pytest.raises(IndexError):
        term(nr, 1)


def test_term_determinism(fixture_name):
    spec = spec_of(fixture_name)
    a = normalize(spec)
    b = normalize(spec)
    assert [term(a, m) for m in range(a.first_index, 80)] == [term(a, m) for m in range(a.first_index, 80)]
    fresh = TermGenerator(b, keep_history=False)
    assert [fresh.term(m) for m in range(a.first_index, 80)] == [term(a, m) for m in range(a.first_index, 80)]
    it = iter_terms(b, 40)
    assert [next(it) for _ in range(10)] == [(m, term(a, m)) for m in range(40, 50)]


def test_history_disabled_discards():
    gen = TermGenerator(normalize(spec_of("franel")), keep_history=False)
    gen.term(100)
    with pytest.raises(IndexError, match="discarded"):
        gen.term(10)


def test_fibonacci():
    nr = normalize(spec_of("fibonacci"))
    assert [term(nr, m) for m in range(10)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]


def test_rational_terms():
    nr = normalize(parse_spec(doc(numerators=[["1"]], denominators=[["0", "2"]])))
    # a_n = a_{n-1} / (2n)
    assert term(nr, 3) == Fraction(1, 48)


recurrences = st.builds(
    lambda d, nums, dens, init: (d, nums[:d], dens[:d], init[:d]),
    st.integers(1, 3),
    st.lists(st.lists(st.integers(-20, 20), min_size=1, max_size=3), min_size=3, max_size=3),
    st.lists(st.integers(1, 9), min_size=3, max_size=3),
    st.lists(st.integers(-5, 5), min_size=3, max_size=3),
)


@settings(max_examples=60, deadline=None)
@given(recurrences)
def test_term_generator_against_direct_recurrence(case):
    d, nums, dens, init = case
    d_doc = doc(
        order=d,
        recurrence_start=d,
        numerators=[[str(c) for c in cs] for cs in nums],
        denominators=[[str(c), "1", "1"] for c in dens],
        initial_terms={str(i): str(v) for i, v in enumerate(init)},
    )
    nr = normalize(parse_spec(d_doc))
    seq = [Fraction(v) for v in init]
    for m in range(d, 40):
        total = Fraction(0)
        for j in range(d):
            num = sum(c * m**i for i, c in enumerate(nums[j]))
            total += Fraction(num, dens[j] + m + m * m) * seq[m - j - 1]
        seq.append(total)
    assert [term(nr, m) for m in range(40)] == seq


def test_data_dir_has_all_fixtures():
    assert {p.stem for p in DATA.glob("*.json")} == set(ALL)
