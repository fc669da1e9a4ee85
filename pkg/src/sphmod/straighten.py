"""Straightening relations, rewriting to normal form, str, and confluence checks.

Rewrite rules act on adjacent letter pairs in J2 (ascending values, or, in
case S, equal values with different characters).  Every rule replaces a pair
by pairs whose first letter is strictly larger, so the value vector of a word
strictly increases lexicographically at each step; the normal-form loop
exploits this by always expanding the lexicographically smallest pending word.
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .coeff import ONE, ZERO, CaseConfig, Scalar, q0_of, q_of
from .typmon import (
    Element,
    Letter,
    Monomial,
    OrbitCombination,
    concat,
    delta_to_orbit,
    is_normal_word,
    monomial_str,
    word_to_delta,
)

DEFAULT_FUEL = 10**6


class NotInJ2(ValueError):
    pass


class FuelExhausted(RuntimeError):
    pass


class NonConfluent(AssertionError):
    def __init__(self, monomial, left, right):
        super().__init__(f"overlap {monomial_str(monomial)} is not resolvable")
        self.monomial = monomial
        self.left = left
        self.right = right


def in_j2(x: Letter, y: Letter) -> bool:
    return x[0] < y[0] or (x[0] == y[0] and x[1] != y[1])


# ---------------------------------------------------------------------------
# generators


def _gap_coeff(cfg: CaseConfig, d: int) -> Scalar:
    """(-q0)^{d-1} in case uH, q^{2(d-1)} in case A."""
    if cfg.case == "uH":
        return (-q0_of(cfg)) ** (d - 1)
    return q_of(cfg) ** (2 * (d - 1))


def _el(terms: Iterable[tuple[Sequence[Letter], object]]) -> Element:
    acc: dict = {}
    for m, c in terms:
        m = tuple(m)
        c = c if isinstance(c, Scalar) else Scalar.const(c)
        acc[m] = acc.get(m, ZERO) + c
    return Element(2, acc)


def rel_uHA(cfg: CaseConfig, a: int, b: int | None = None) -> Element:
    """Rel(a) when ``b`` is None, else Rel(a, b) for b > a."""
    if b is None:
        return _el([(((a, 1), (a + 1, 1)), 1), (((a + 1, 1), (a, 1)), -1)])
    if b <= a:
        raise ValueError("Rel(a, b) needs b > a")
    c = _gap_coeff(cfg, b - a)
    w = lambda x, y: ((x, 1), (y, 1))
    return _el([(w(a, b), ONE), (w(a + 1, b - 1), -ONE), (w(b, a), -c), (w(b - 1, a + 1), c)])


def rel_half(cfg: CaseConfig, a: int, b: int, s: int) -> Element:
    eps = cfg.epsilon
    return _el([
        (((a, s), (b, s)), -1),
        (((a - 1, s), (b + 1, s)), 1),
        (((a, -s), (b, -s)), -eps),
        (((a + 1, -s), (b - 1, -s)), eps),
    ])


def rel_S(cfg: CaseConfig, a: int, s1: int, b: int, s2: int) -> Element:
    """Rel((a, s1), (b, s2)) in case S (b >= a, parity/sign conditions as defined)."""
    q = q_of(cfg)
    d = b - a
    if d < 0:
        raise ValueError("need b >= a")
    if d % 2 == 1:
        c = q ** ((d - 1) // 2)
        return _el([
            (((a, s1), (b, s2)), ONE),
            (((a + 1, s2), (b - 1, s1)), -ONE),
            (((b, s2), (a, s1)), -c),
            (((b - 1, s1), (a + 1, s2)), c),
        ])
    if s1 != s2:
        s = s1
        return _el([(((a, s), (b, -s)), ONE), (((b, s), (a, -s)), q ** (d // 2))])
    if d == 0:
        raise ValueError("Rel((a,s),(a,s)) is not a generator")
    s = s1
    return rel_half(cfg, a + 1, b - 1, s) + rel_half(cfg, b - 1, a + 1, s).scale(q ** ((d - 2) // 2))


def rel_generators(cfg: CaseConfig, window: tuple[int, int]) -> list[Element]:
    """All generators of Rel whose letters lie in ``window``."""
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    out = []
    if cfg.case in ("uH", "A"):
        for a in range(lo, hi):
            out.append(rel_uHA(cfg, a))
        for a in range(lo, hi + 1):
            for b in range(a + 1, hi + 1):
                out.append(rel_uHA(cfg, a, b))
        return out
    for a in range(lo, hi + 1):
        for b in range(a, hi + 1):
            for s1, s2 in itertools.product((1, -1), repeat=2):
                if a == b and s1 == s2:
                    continue
                out.append(rel_S(cfg, a, s1, b, s2))
    return out


# ---------------------------------------------------------------------------
# rewrite rules


@dataclass(frozen=True)
class RewriteRule:
    lhs: Monomial
    rhs: Element

    def __str__(self):
        return f"{monomial_str(self.lhs)} -> {self.rhs!r}"


def _rule_terms(cfg: CaseConfig, x: Letter, y: Letter) -> tuple[tuple[Monomial, Scalar], ...]:
    """Right-hand side of the rule for the J2 pair ``x y`` as (pair, coeff) terms."""
    (a, s1), (b, s2) = x, y
    if cfg.case in ("uH", "A"):
        if b == a + 1:
            return (((b, 1), (a, 1)), ONE),
        c = _gap_coeff(cfg, b - a)
        return (
            (((a + 1, 1), (b - 1, 1)), ONE),
            (((b, 1), (a, 1)), c),
            (((b - 1, 1), (a + 1, 1)), -c),
        )
    q = q_of(cfg)
    eps = Scalar.const(cfg.epsilon)
    d = b - a
    if d == 0:
        return ()
    if d == 1:
        return (((b, s2), (a, s1)), ONE),
    if d % 2 == 1:
        c = q ** ((d - 1) // 2)
        return (
            (((a + 1, s2), (b - 1, s1)), ONE),
            (((b, s2), (a, s1)), c),
            (((b - 1, s1), (a + 1, s2)), -c),
        )
    if s1 != s2:
        return (((b, s1), (a, s2)), -(q ** (d // 2))),
    s = s1
    if d == 2:
        return (
            (((a + 1, s), (a + 1, s)), ONE),
            (((a + 1, -s), (a + 1, -s)), eps),
            (((a + 2, -s), (a, -s)), -eps),
        )
    c = q ** ((d - 2) // 2)
    terms = [
        (((a + 1, s), (b - 1, s)), ONE),
        (((a + 1, -s), (b - 1, -s)), eps),
        (((a + 2, -s), (b - 2, -s)), -eps),
        (((b - 1, s), (a + 1, s)), c),
        (((b - 2, s), (a + 2, s)), -c),
        (((b - 1, -s), (a + 1, -s)), eps * c),
        (((b, -s), (a, -s)), -(eps * c)),
    ]
    return tuple(terms)


_RULE_CACHE: dict = {}


def _rule(cfg: CaseConfig, x: Letter, y: Letter):
    key = (cfg, x, y)
    r = _RULE_CACHE.get(key)
    if r is None:
        r = _RULE_CACHE[key] = _rule_terms(cfg, x, y)
    return r


def rewrite_rule_for(lhs: Sequence[Letter], cfg: CaseConfig) -> RewriteRule:
    lhs = tuple((int(a), int(s)) for a, s in lhs)
    if len(lhs) != 2 or not in_j2(*lhs):
        raise NotInJ2(f"{monomial_str(lhs)} is not a J2 pair")
    if cfg.case != "S" and (lhs[0][1] != 1 or lhs[1][1] != 1):
        raise NotInJ2("signs must be + outside case S")
    return RewriteRule(lhs, _el(_rule_terms(cfg, *lhs)))


def generator_for(lhs: Sequence[Letter], cfg: CaseConfig) -> Element:
    """The generator of Rel indexed by the J2 pair ``lhs``."""
    (a, s1), (b, s2) = lhs
    if cfg.case in ("uH", "A"):
        return rel_uHA(cfg, a) if b == a + 1 else rel_uHA(cfg, a, b)
    return rel_S(cfg, a, s1, b, s2)


def rule_from_generator(lhs: Sequence[Letter], cfg: CaseConfig) -> Element:
    """Solve the generator for its leading J2 word: rhs = lhs - g / g[lhs]."""
    lhs = tuple(lhs)
    g = generator_for(lhs, cfg)
    lead = g.coeff(lhs)
    if not lead.is_constant():
        raise AssertionError("leading coefficient of a generator must be a constant")
    inv = Scalar.const(1 / lead.constant())
    return Element.word(lhs) - g.scale(inv)


# ---------------------------------------------------------------------------
# normal forms


def _first_j2(m: Monomial) -> int:
    for i in range(len(m) - 1):
        x, y = m[i], m[i + 1]
        if x[0] < y[0] or (x[0] == y[0] and x[1] != y[1]):
            return i
    return -1


def _avec(m: Monomial) -> tuple[int, ...]:
    return tuple(a for a, _ in m)


@lru_cache(maxsize=1 << 18)
def _nf_monomial(m: Monomial, cfg: CaseConfig, fuel: int) -> tuple[tuple[Monomial, Scalar], ...]:
    if _first_j2(m) < 0:
        return ((m, ONE),)
    pending: dict[Monomial, Scalar] = {m: ONE}
    heap = [(_avec(m), m)]
    out: dict[Monomial, Scalar] = {}
    steps = 0
    while heap:
        _, w = heapq.heappop(heap)
        c = pending.pop(w, None)
        if c is None or not c:
            continue
        i = _first_j2(w)
        if i < 0:
            prev = out.get(w)
            c = c if prev is None else prev + c
            if c:
                out[w] = c
            else:
                out.pop(w, None)
            continue
        steps += 1
        if steps > fuel:
            raise FuelExhausted(f"normal form of {monomial_str(m)} exceeded {fuel} rewrite steps")
        pre, post = w[:i], w[i + 2:]
        for pr, k in _rule(cfg, w[i], w[i + 1]):
            w2 = pre + pr + post
            prev = pending.get(w2)
            if prev is None:
                pending[w2] = c * k
                heapq.heappush(heap, (_avec(w2), w2))
            else:
                pending[w2] = prev + c * k
    return tuple(out.items())


def normal_form(x: Element, cfg: CaseConfig, fuel: int = DEFAULT_FUEL) -> Element:
    """Reduce ``x`` modulo Rel to the span of normal-form words."""
    acc: dict[Monomial, Scalar] = {}
    for m, c in x.items():
        for w, k in _nf_monomial(m, cfg, fuel):
            v = c * k
            prev = acc.get(w)
            acc[w] = v if prev is None else prev + v
    out = object.__new__(Element)
    out._t = {w: c for w, c in acc.items() if c}
    out.degree = x.degree
    return out


def normal_form_random(x: Element, cfg: CaseConfig, rng: random.Random, fuel: int = DEFAULT_FUEL) -> Element:
    """Normal form by rewriting a random J2 pair of a random pending word."""
    pending: dict[Monomial, Scalar] = {}
    done: dict[Monomial, Scalar] = {}

    def add(w, c):
        target = pending if _first_j2(w) >= 0 else done
        v = target.get(w)
        v = c if v is None else v + c
        if v:
            target[w] = v
        else:
            target.pop(w, None)

    for m, c in x.items():
        add(m, c)
    steps = 0
    while pending:
        w = rng.choice(list(pending))
        c = pending.pop(w)
        spots = [i for i in range(len(w) - 1) if in_j2(w[i], w[i + 1])]
        i = rng.choice(spots)
        steps += 1
        if steps > fuel:
            raise FuelExhausted("random normal form exceeded its fuel")
        for pr, k in _rule(cfg, w[i], w[i + 1]):
            add(w[:i] + pr + w[i + 2:], c * k)
    return Element(x.degree, done)


def is_normal(x: Element) -> bool:
    return all(is_normal_word(m) for m in x.keys())


def str_map(x: Element, cfg: CaseConfig) -> OrbitCombination:
    """Canonical map R[Typ_r] -> R[Typ^0_r] (kernel Rel_r)."""
    return delta_to_orbit(normal_form(x, cfg), cfg)


def str_of_word(e: Sequence[int], chi: Sequence[int], cfg: CaseConfig) -> OrbitCombination:
    """str(delta(e, chi)) for an arbitrary (not necessarily descending) word."""
    return str_map(word_to_delta(e, chi, cfg), cfg)


# ---------------------------------------------------------------------------
# confluence


def _letters(cfg: CaseConfig, window: tuple[int, int]) -> list[Letter]:
    lo, hi = window
    return [(a, s) for a in range(lo, hi + 1) for s in cfg.signs]


def named_overlap_families(cfg: CaseConfig) -> dict[str, list[Monomial]]:
    """The finite list of overlaps that the translation argument reduces to, by shape."""
    P = itertools.product
    if cfg.case in ("uH", "A"):
        return {"P(0,1,2)": [((0, 1), (1, 1), (2, 1))]}
    return {
        "P(0,-s;0,s;0,-s)": [((0, -s), (0, s), (0, -s)) for s in (1, -1)],
        "P(0,-s1;0,s1;1,s2)": [((0, -a), (0, a), (1, b)) for a, b in P((1, -1), repeat=2)],
        "P(0,-s;0,s;2,s)": [((0, -s), (0, s), (2, s)) for s in (1, -1)],
        "P(0,s1;1,s2;2,s3)": [((0, a), (1, b), (2, c)) for a, b, c in P((1, -1), repeat=3)],
        "P(0,s1;1,s2;3,s2)": [((0, a), (1, b), (3, b)) for a, b in P((1, -1), repeat=2)],
        "P(0,s;2,s;4,s)": [((0, s), (2, s), (4, s)) for s in (1, -1)],
    }


def named_overlaps(cfg: CaseConfig) -> list[Monomial]:
    return [m for ms in named_overlap_families(cfg).values() for m in ms]


@dataclass
class ConfluenceReport:
    cfg: CaseConfig
    window: tuple[int, int]
    checked: int = 0
    failures: list = field(default_factory=list)
    named: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and all(v is not False for v in self.named.values())

    @property
    def covers_named(self) -> bool:
        return all(self.named.get(m) is not None for m in named_overlaps(self.cfg))

    def to_json(self) -> dict:
        return {
            "case": self.cfg.case,
            "epsilon": self.cfg.epsilon,
            "window": list(self.window),
            "overlaps_checked": self.checked,
            "confluent": self.ok,
            "covers_named_overlaps": self.covers_named,
            "named_overlaps": [
                {
                    "family": fam,
                    "overlaps": [
                        {"overlap": monomial_str(m), "status": _status(self.named.get(m))} for m in ms
                    ],
                }
                for fam, ms in named_overlap_families(self.cfg).items()
            ],
            "failures": [
                {"overlap": monomial_str(m), "left": repr(l), "right": repr(r)} for m, l, r in self.failures
            ],
        }


def _status(v) -> str:
    return "ok" if v else ("missing" if v is None else "FAIL")


def resolve_overlap(m: Monomial, cfg: CaseConfig) -> tuple[Element, Element]:
    """Normal forms after rewriting the left pair first and the right pair first."""
    x, y, z = m
    left = concat(rewrite_rule_for((x, y), cfg).rhs, Element.word((z,)))
    right = concat(Element.word((x,)), rewrite_rule_for((y, z), cfg).rhs)
    return normal_form(left, cfg), normal_form(right, cfg)


def confluence_check(cfg: CaseConfig, window: tuple[int, int] = (0, 4), raise_on_failure: bool = False) -> ConfluenceReport:
    letters = _letters(cfg, window)
    report = ConfluenceReport(cfg, tuple(window))
    seen = set()
    for x in letters:
        for y in letters:
            if not in_j2(x, y):
                continue
            for z in letters:
                if not in_j2(y, z):
                    continue
                m = (x, y, z)
                l, r = resolve_overlap(m, cfg)
                report.checked += 1
                seen.add(m)
                if l != r:
                    report.failures.append((m, l, r))
                    if raise_on_failure:
                        raise NonConfluent(m, l, r)
    for m in named_overlaps(cfg):
        if m in seen:
            report.named[m] = not any(f[0] == m for f in report.failures)
        else:
            report.named[m] = None
    return report


# ---------------------------------------------------------------------------
# derived relations in case S


@dataclass
class DerivedReport:
    cfg: CaseConfig
    results: list = field(default_factory=list)  # (name, a, signs, remainder)

    @property
    def ok(self) -> bool:
        return all(rem.is_zero() for *_, rem in self.results)


def _w(cfg, pairs) -> Element:
    return word_to_delta([a for a, _ in pairs], [c for _, c in pairs], cfg)


def derived_relations_check(cfg: CaseConfig, window: tuple[int, int] = (0, 4)) -> DerivedReport:
    """Check the three congruences implied by the case-S generators."""
    if cfg.case != "S":
        raise ValueError("derived relations are specific to case S")
    lo, hi = window
    q = q_of(cfg)
    eps = cfg.epsilon
    rep = DerivedReport(cfg)
    half = Fraction(1, 2)
    for a in range(lo, hi + 1):
        for p1, p2 in itertools.product((1, -1), repeat=2):
            x = _w(cfg, [(a, p1), (a, p2)]) - _w(cfg, [(a, -p1), (a, -p2)])
            rep.results.append(("changeDets", a, (p1, p2), normal_form(x, cfg)))
            if a + 1 <= hi:
                x = _w(cfg, [(a, p1), (a + 1, p2)]) - _w(cfg, [(a + 1, p2), (a, p1)])
                rep.results.append(("relation1", a, (p1, p2), normal_form(x, cfg)))
            if a + 2 <= hi:
                ep = eps * p1 * p2
                rhs = (
                    _w(cfg, [(a + 1, p1), (a + 1, p2)]).scale(1 + ep)
                    - _w(cfg, [(a + 2, p2), (a, p1)]).scale(Scalar.const(ep * half) * (1 + q * eps))
                    - _w(cfg, [(a + 2, -p2), (a, -p1)]).scale(Scalar.const(ep * half) * (1 - q * eps))
                )
                x = _w(cfg, [(a, p1), (a + 2, p2)]) - rhs
                rep.results.append(("concreteRel", a, (p1, p2), normal_form(x, cfg)))
        if a + 2 <= hi:
            for s in (1, -1):
                lhs = Element.word([(a, s), (a + 2, s)])
                rhs = _el([
                    (((a + 1, s), (a + 1, s)), 1),
                    (((a + 1, -s), (a + 1, -s)), eps),
                    (((a + 2, -s), (a, -s)), -eps),
                ])
                rep.results.append(("sigmaRel", a, (s,), normal_form(lhs - rhs, cfg)))
    return rep
