import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphmod.coeff import ONE, U, CaseConfig, Scalar, scalar_eval_q
from sphmod.straighten import (
    FuelExhausted,
    NonConfluent,
    NotInJ2,
    confluence_check,
    derived_relations_check,
    generator_for,
    in_j2,
    is_normal,
    named_overlap_families,
    named_overlaps,
    normal_form,
    normal_form_random,
    rel_generators,
    rel_S,
    rel_uHA,
    rewrite_rule_for,
    rule_from_generator,
    str_map,
)
from sphmod.typmon import Element, OrbitType, concat, is_normal_word, normal_words, sigma

from strategies import ALL_CASES, cases, elements, words

uH, A = CaseConfig("uH"), CaseConfig("A")
Sp, Sm = CaseConfig("S", 1), CaseConfig("S", -1)
q = U ** 2


def P(*a):
    return Element.word([(x, 1) for x in a])


def test_generator_examples():
    assert rel_uHA(uH, 0) == P(0, 1) - P(1, 0)
    assert rel_uHA(A, 0, 2) == P(0, 2) - P(1, 1) - (P(2, 0) - P(1, 1)).scale(q ** 2)
    for cfg in (Sp, Sm):
        for s in (1, -1):
            assert rel_S(cfg, 3, s, 3, -s) == Element.word([(3, s), (3, -s)], Scalar.const(2))
    assert rel_uHA(uH, 0) in rel_generators(uH, (0, 1))


def test_rewrite_rule_examples():
    assert rewrite_rule_for([(0, 1), (1, 1)], uH).rhs == P(1, 0)
    for cfg in (Sp, Sm):
        for s in (1, -1):
            assert rewrite_rule_for([(2, s), (2, -s)], cfg).rhs.is_zero()
            for s2 in (1, -1):
                assert rewrite_rule_for([(2, s), (3, s2)], cfg).rhs == Element.word([(3, s2), (2, s)])
    with pytest.raises(NotInJ2):
        rewrite_rule_for([(1, 1), (0, 1)], uH)
    with pytest.raises(NotInJ2):
        rewrite_rule_for([(1, 1), (1, 1)], Sp)
    with pytest.raises(NotInJ2):
        rewrite_rule_for([(0, -1), (1, 1)], A)


@pytest.mark.parametrize("cfg", ALL_CASES, ids=str)
def test_rule_table_matches_generators(cfg):
    letters = [(a, s) for a in range(-1, 6) for s in cfg.signs]
    for x in letters:
        for y in letters:
            if in_j2(x, y):
                rule = rewrite_rule_for([x, y], cfg)
                assert rule.rhs == rule_from_generator([x, y], cfg)
                # the rule is "lhs = rhs modulo the generator"
                assert normal_form(Element.word([x, y]) - rule.rhs, cfg).is_zero()
                assert normal_form(generator_for([x, y], cfg), cfg).is_zero()


def test_normal_form_examples():
    q0 = -q
    assert normal_form(P(0, 2), uH) == P(1, 1).scale(ONE + q0) - P(2, 0).scale(q0)
    assert normal_form(P(0, 2), A) == P(1, 1).scale(ONE - q ** 2) + P(2, 0).scale(q ** 2)
    w = Element.word([(4, -1), (2, 1), (2, 1), (0, -1)])
    assert normal_form(w, Sp) == w


def test_str_examples():
    for cfg in ALL_CASES:
        for g in rel_generators(cfg, (0, 3)):
            assert str_map(g, cfg).is_zero()
    comb = str_map(P(0, 2), uH)
    at2 = {o: scalar_eval_q(c, 2, "uH") for o, c in comb.items()}
    assert at2 == {OrbitType({1: 2}): 3, OrbitType({2: 1, 0: 1}): -2}


def test_fuel():
    w = P(0, 5, 0, 5)
    with pytest.raises(FuelExhausted):
        normal_form(w, A, fuel=3)
    assert not normal_form(w, A).is_zero()


@pytest.mark.parametrize("cfg", ALL_CASES, ids=str)
def test_confluence(cfg):
    rep = confluence_check(cfg, (0, 4))
    assert rep.ok and rep.checked > 0
    assert set(named_overlaps(cfg)) <= set(rep.named)
    assert all(rep.named[m] for m in named_overlaps(cfg))
    js = rep.to_json()
    assert js["confluent"] is True and js["covers_named_overlaps"] is True
    assert len(js["named_overlaps"]) == (1 if cfg.case != "S" else 6)


def test_named_overlap_lists():
    assert named_overlaps(uH) == [((0, 1), (1, 1), (2, 1))]
    fams = named_overlap_families(Sp)
    assert len(fams) == 6
    assert ((0, 1), (2, 1), (4, 1)) in fams["P(0,s;2,s;4,s)"]
    for ms in fams.values():
        for x, y, z in ms:
            assert in_j2(x, y) and in_j2(y, z)


def _clear_caches(mod):
    mod._nf_monomial.cache_clear()
    mod._RULE_CACHE.clear()


def test_confluence_failure_is_reported(monkeypatch):
    import sphmod.straighten as st_mod

    real = st_mod._rule_terms

    def broken(cfg, x, y):
        terms = real(cfg, x, y)
        if x == (0, 1) and y == (1, 1):
            return tuple((m, c * 2) for m, c in terms)
        return terms

    _clear_caches(st_mod)
    monkeypatch.setattr(st_mod, "_rule_terms", broken)
    try:
        rep = confluence_check(uH, (0, 3))
        assert not rep.ok and rep.failures
        with pytest.raises(NonConfluent):
            confluence_check(uH, (0, 3), raise_on_failure=True)
    finally:
        monkeypatch.undo()
        _clear_caches(st_mod)
    assert confluence_check(uH, (0, 3)).ok


@pytest.mark.parametrize("cfg", [Sp, Sm], ids=str)
def test_derived_relations(cfg):
    rep = derived_relations_check(cfg, (0, 4))
    assert rep.ok
    names = {name for name, *_ in rep.results}
    assert names == {"changeDets", "relation1", "concreteRel", "sigmaRel"}
    concrete = [rem for name, a, s, rem in rep.results if name == "concreteRel" and a == 0 and s == (1, 1)]
    assert concrete and concrete[0].is_zero()
    with pytest.raises(ValueError):
        derived_relations_check(uH)


@pytest.mark.parametrize("cfg", ALL_CASES, ids=str)
def test_normal_words_are_exactly_the_irreducible_words(cfg):
    for r in (1, 2, 3):
        expected = set(normal_words(cfg, r, 0, 2))
        for m in _all_words(cfg, r, 0, 2):
            nf = normal_form(Element.word(m), cfg)
            assert (nf == Element.word(m)) == (m in expected)
            assert is_normal_word(m, cfg) == (m in expected)


def _all_words(cfg, r, lo, hi):
    import itertools

    letters = [(a, s) for a in range(lo, hi + 1) for s in cfg.signs]
    return itertools.product(letters, repeat=r)


@given(st.data(), cases)
def test_envelope_and_grading(data, cfg):
    m = data.draw(words(cfg, data.draw(st.integers(2, 4)), 0, 5))
    lo, hi = min(a for a, _ in m), max(a for a, _ in m)
    for w, _ in normal_form(Element.word(m), cfg).items():
        assert all(lo <= a <= hi for a, _ in w)
        assert sigma(w) == sigma(m)


@given(st.data(), cases)
def test_idempotent(data, cfg):
    x = data.draw(elements(cfg, r=data.draw(st.integers(1, 4))))
    y = normal_form(x, cfg)
    assert is_normal(y)
    assert normal_form(y, cfg) == y


@given(st.data(), cases)
def test_kernel_and_two_sided_ideal(data, cfg):
    gens = rel_generators(cfg, (0, 4))
    g = data.draw(st.sampled_from(gens))
    assert normal_form(g, cfg).is_zero()
    left = Element.word(data.draw(words(cfg, data.draw(st.integers(0, 2)), 0, 4)))
    right = Element.word(data.draw(words(cfg, data.draw(st.integers(0, 2)), 0, 4)))
    assert normal_form(concat(concat(left, g), right), cfg).is_zero()


@given(st.data(), cases, st.integers(0, 2 ** 32 - 1))
def test_strategy_independence(data, cfg, seed):
    x = data.draw(elements(cfg, r=data.draw(st.integers(2, 4))))
    assert normal_form_random(x, cfg, random.Random(seed)) == normal_form(x, cfg)


@given(st.data(), cases)
def test_normal_form_is_linear(data, cfg):
    r = data.draw(st.integers(1, 3))
    x = data.draw(elements(cfg, r=r))
    y = data.draw(elements(cfg, r=r))
    assert normal_form(x + y.scale(3), cfg) == normal_form(x, cfg) + normal_form(y, cfg).scale(3)


def test_small_window_is_confluent_but_incomplete():
    rep = confluence_check(Sm, (0, 2))
    assert rep.ok and not rep.failures
    assert not rep.covers_named
    assert rep.to_json()["covers_named_overlaps"] is False
