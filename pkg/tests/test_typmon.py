import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphmod.coeff import ONE, CaseConfig, Scalar
from sphmod.straighten import normal_form, str_map
from sphmod.typmon import (
    DegreeMismatch,
    Element,
    NotDescending,
    OrbitType,
    concat,
    delta_to_orbit,
    element_from_json,
    element_to_json,
    is_normal_word,
    monomial_str,
    normal_words,
    orbit_of_descending,
    orbit_to_delta,
    pair,
    parse_monomial,
    sigma,
    translate,
    word_to_delta,
)

from strategies import ALL_CASES, cases, elements, orbits, s_cases, words

S = CaseConfig("S", 1)
uH = CaseConfig("uH")


def test_concat_letters():
    x = concat(Element.word([(3, 1)]), Element.word([(1, -1)]))
    assert x == Element.word([(3, 1), (1, -1)])


def test_unit_word():
    x = Element.word([(2, 1), (0, -1)], Scalar.const(5))
    assert concat(Element.unit(), x) == x == concat(x, Element.unit())


def test_translate_examples():
    x = Element.word([(0, 1), (0, 1)])
    assert translate((2, 0), x) == Element.word([(2, 1), (0, 1)])
    assert translate((0, 0), x) == x
    with pytest.raises(DegreeMismatch):
        translate((1,), x)


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        Element.word([(0, 1)]) + Element.word([(0, 1), (0, 1)])


def test_orbit_of_descending():
    o = orbit_of_descending([(1, 1), (0, -1)])
    assert o.e0 == {1: 1, 0: 1} and o.chi0 == {1: 1, 0: -1}
    o = orbit_of_descending([(0, 1), (0, 1)])
    assert o.e0 == {0: 2} and o.chi0 == {0: 1}
    with pytest.raises(NotDescending):
        orbit_of_descending([(0, -1), (1, 1)])


def test_orbit_of_descending_block_sign_is_a_product():
    assert orbit_of_descending([(2, -1), (2, -1)]) == orbit_of_descending([(2, 1), (2, 1)])
    assert orbit_of_descending([(2, -1), (2, 1)]) == orbit_of_descending([(2, 1), (2, -1)])


def test_orbit_validation():
    with pytest.raises(ValueError):
        OrbitType({0: -1})
    with pytest.raises(ValueError):
        OrbitType({0: 1}, {1: -1})
    assert OrbitType({0: 0, 1: 2}).e0 == {1: 2}


def test_orbit_to_delta_case_s_rank_one():
    x = orbit_to_delta(OrbitType({0: 1}, {0: 1}), S)
    half = Scalar.const(Fraction(1, 2))
    assert x == Element.word([(0, 1)], half) + Element.word([(0, -1)], half)


def test_orbit_to_delta_trivial_signs():
    for cfg in (uH, CaseConfig("A")):
        o = OrbitType({3: 1, 1: 2})
        x = orbit_to_delta(o, cfg)
        assert x == Element.word([(3, 1), (1, 1), (1, 1)])
        assert delta_to_orbit(x, cfg).coeff(o) == ONE


def test_str_of_orbit_word():
    x = word_to_delta([1, 0], [1, -1], S)
    comb = str_map(x, S)
    assert dict(comb.items()) == {OrbitType({1: 1, 0: 1}, {1: 1, 0: -1}): ONE}


@pytest.mark.parametrize("cfg", ALL_CASES[2:])
def test_orbit_words_with_repeated_entries(cfg):
    # the chi-labels of a repeated entry only matter through their product
    for chi in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        x = word_to_delta([2, 2], chi, cfg)
        o = orbit_of_descending(list(zip([2, 2], chi)))
        assert dict(str_map(x, cfg).items()) == {o: ONE}


def test_pair_orthonormal():
    ws = list(normal_words(S, 2, 0, 2))
    for a in ws:
        for b in ws:
            expected = ONE if a == b else Scalar()
            assert pair(Element.word(a), Element.word(b), S) == expected
    x, y = Element.word(ws[0]), Element.word(ws[0]) + Element.word(ws[1])
    assert pair(x.scale(2), y, S) == pair(x, y, S) * 2


def test_monomial_text_round_trip():
    m = ((3, 1), (-1, -1))
    assert parse_monomial(monomial_str(m)) == m


def test_json_round_trip_and_errors():
    x = Element.word([(1, 1), (0, -1)], Scalar({2: 1, 0: Fraction(1, 2)}))
    obj = element_to_json(x, S)
    y, cfg = element_from_json(json.loads(json.dumps(obj)))
    assert y == x and cfg == S
    with pytest.raises(ValueError):
        element_from_json({"case": "S", "r": 1})
    with pytest.raises(ValueError):
        element_from_json({"case": "uH", "r": 1, "terms": [{"monomial": [[0, "-"]], "coeff": "1"}]})
    with pytest.raises(ValueError):
        element_from_json({"case": "Q", "r": 1, "terms": []})


@given(st.data(), cases)
def test_concat_bilinear_and_grading(data, cfg):
    x = data.draw(elements(cfg, r=2))
    y = data.draw(elements(cfg, r=2))
    z = data.draw(elements(cfg, r=1))
    assert concat(x + y, z) == concat(x, z) + concat(y, z)
    for m, _ in concat(x, z).items():
        left, right = m[:2], m[2:]
        assert sigma(m) == sigma(left) + sigma(right)


@given(st.data(), cases)
def test_translate_composes(data, cfg):
    x = data.draw(elements(cfg, r=3))
    e1 = data.draw(st.tuples(*[st.integers(-3, 3)] * 3))
    e2 = data.draw(st.tuples(*[st.integers(-3, 3)] * 3))
    both = tuple(a + b for a, b in zip(e1, e2))
    assert translate(e1, translate(e2, x)) == translate(both, x)
    for m, _ in translate(e1, x).items():
        src = tuple((a - d, s) for (a, s), d in zip(m, e1))
        assert sigma(m) == sigma(src) + sum(e1)


@given(st.data(), cases)
def test_orbit_delta_inverse(data, cfg):
    o = data.draw(orbits(cfg))
    x = orbit_to_delta(o, cfg)
    assert all(is_normal_word(m, cfg) for m in x.keys())
    assert dict(delta_to_orbit(x, cfg).items()) == {o: ONE}


@given(st.data(), cases)
def test_delta_orbit_inverse_on_normal_forms(data, cfg):
    x = normal_form(data.draw(elements(cfg, r=data.draw(st.integers(1, 3)), hi=3)), cfg)
    back = Element.zero(x.degree)
    for o, c in delta_to_orbit(x, cfg).items():
        back = back + orbit_to_delta(o, cfg).scale(c)
    assert back == x
