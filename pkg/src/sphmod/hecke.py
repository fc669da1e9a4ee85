"""Minuscule Hecke operators as translation operators, and their action on orbits.

A :class:`TranslationOperator` of degree r is a finite sum of terms
``c * x^k * t(shift)``.  Translations commute, so operators form a commutative
algebra; ``x`` is a formal variable grading the operator family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .coeff import ONE, ZERO, CaseConfig, Scalar, format_scalar, q0_of, q_of
from .qcomb import count_Q, inv_stat, inv_tilde, lambda_m
from .straighten import generator_for, in_j2, normal_form, rel_generators, str_map
from .typmon import (
    DegreeMismatch,
    Element,
    Monomial,
    OrbitCombination,
    OrbitType,
    concat,
    is_normal_word,
    monomial_str,
    orbit_to_delta,
    translate,
    word_to_delta,
)


class WrongCase(ValueError):
    pass


Shift = tuple[int, ...]


class TranslationOperator:
    """Sparse map (shift, x-power) -> Scalar."""

    __slots__ = ("degree", "_t")

    def __init__(self, degree: int, terms: Mapping[tuple[Shift, int], Scalar] | Iterable = ()):
        self.degree = degree
        t: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (shift, k), c in items:
            shift = tuple(shift)
            if len(shift) != degree:
                raise DegreeMismatch(f"shift {shift} in an operator of degree {degree}")
            c = c if isinstance(c, Scalar) else Scalar.const(c)
            v = t.get((shift, k), ZERO) + c
            if v:
                t[(shift, k)] = v
            else:
                t.pop((shift, k), None)
        self._t = t

    @classmethod
    def identity(cls, r: int) -> "TranslationOperator":
        return cls(r, {((0,) * r, 0): ONE})

    @classmethod
    def t(cls, shift: Sequence[int], xpow: int = 0, c=ONE) -> "TranslationOperator":
        return cls(len(shift), {(tuple(shift), xpow): c})

    @classmethod
    def t_i(cls, r: int, i: int, b: int, xpow: int = 0, c=ONE) -> "TranslationOperator":
        """t_i(b) (1-based position i) in degree r."""
        shift = [0] * r
        shift[i - 1] = b
        return cls.t(shift, xpow, c)

    def items(self):
        return self._t.items()

    def coeff(self, shift: Sequence[int], xpow: int = 0) -> Scalar:
        return self._t.get((tuple(shift), xpow), ZERO)

    def xpowers(self) -> list[int]:
        return sorted({k for _, k in self._t})

    def component(self, k: int) -> "TranslationOperator":
        """[x^k] of the operator, as an x-free operator."""
        return TranslationOperator(self.degree, {(s, 0): c for (s, j), c in self._t.items() if j == k})

    def __add__(self, other: "TranslationOperator") -> "TranslationOperator":
        if other.degree != self.degree:
            raise DegreeMismatch("operator degrees differ")
        return TranslationOperator(self.degree, list(self._t.items()) + list(other._t.items()))

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TranslationOperator":
        c = c if isinstance(c, Scalar) else Scalar.const(c)
        return TranslationOperator(self.degree, {key: v * c for key, v in self._t.items()})

    def __mul__(self, other):
        if not isinstance(other, TranslationOperator):
            return self.scale(other)
        if other.degree != self.degree:
            raise DegreeMismatch("operator degrees differ")
        acc: dict = {}
        for (s1, k1), c1 in self._t.items():
            for (s2, k2), c2 in other._t.items():
                key = (tuple(a + b for a, b in zip(s1, s2)), k1 + k2)
                acc[key] = acc.get(key, ZERO) + c1 * c2
        return TranslationOperator(self.degree, acc)

    __rmul__ = scale

    def subs_x(self, c: Scalar) -> "TranslationOperator":
        """x -> c * x."""
        c = c if isinstance(c, Scalar) else Scalar.const(c)
        return TranslationOperator(self.degree, {(s, k): v * c ** k for (s, k), v in self._t.items()})

    def extend(self, r: int) -> "TranslationOperator":
        """View as an operator of degree r >= degree acting on the first coordinates."""
        pad = (0,) * (r - self.degree)
        return TranslationOperator(r, {(s + pad, k): v for (s, k), v in self._t.items()})

    def __eq__(self, other):
        return isinstance(other, TranslationOperator) and self.degree == other.degree and self._t == other._t

    def __hash__(self):
        return hash((self.degree, frozenset(self._t.items())))

    def __repr__(self):
        if not self._t:
            return f"TranslationOperator({self.degree}, 0)"
        parts = []
        for (s, k), c in sorted(self._t.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            xs = "" if k == 0 else ("x*" if k == 1 else f"x^{k}*")
            parts.append(f"({format_scalar(c)})*{xs}t{s}")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [
            {"shift": list(s), "xpow": k, "coeff": format_scalar(c)}
            for (s, k), c in sorted(self._t.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]


# ---------------------------------------------------------------------------
# operator families


@lru_cache(maxsize=None)
def delta_r(cfg: CaseConfig, r: int) -> TranslationOperator:
    if r < 1:
        raise ValueError("r >= 1 required")
    q = q_of(cfg)
    terms = {}
    if cfg.case in ("uH", "S"):
        for eps in itertools.product((0, 1), repeat=r):
            terms[(tuple(2 * e for e in eps), sum(eps))] = q ** inv_stat(eps)
    else:
        for eps in itertools.product((0, 1, 2), repeat=r):
            l1 = lambda_m(eps, 1)
            c = q ** (2 * inv_tilde(eps)) * (q + ONE) ** l1 * q ** (l1 * (l1 - 1) // 2)
            terms[(eps, sum(eps))] = c
    return TranslationOperator(r, terms)


def delta_kr(cfg: CaseConfig, k: int, r: int) -> TranslationOperator:
    return delta_r(cfg, r).component(k)


@lru_cache(maxsize=None)
def delta_half(cfg: CaseConfig, r: int) -> TranslationOperator:
    if cfg.case == "S":
        raise WrongCase("the half operator family exists only in cases uH and A")
    if r < 1:
        raise ValueError("r >= 1 required")
    base = -q0_of(cfg) if cfg.case == "uH" else q_of(cfg) ** 2
    return TranslationOperator(
        r, {(eps, sum(eps)): base ** inv_stat(eps) for eps in itertools.product((0, 1), repeat=r)}
    )


def phi2(cfg: CaseConfig, sign: int) -> TranslationOperator:
    """The degree-2 operators (-q0 t1(1) + t2(1)) (uH) / (q^2 t1(1) + t2(1)) (A) and their
    mirror images that lower instead of raise."""
    if cfg.case == "S":
        raise WrongCase("phi2 is defined here for cases uH and A")
    c = -q0_of(cfg) if cfg.case == "uH" else q_of(cfg) ** 2
    if sign > 0:
        return TranslationOperator.t((1, 0), c=c) + TranslationOperator.t((0, 1))
    return TranslationOperator.t((-1, 0)) + TranslationOperator.t((0, -1), c=c)


def apply_op(op: TranslationOperator, x: Element) -> dict[int, Element]:
    """Apply ``op`` to ``x``; returns the x-graded family {x-power: Element}."""
    if op.degree != x.degree:
        raise DegreeMismatch(f"operator of degree {op.degree} applied to degree {x.degree}")
    out: dict[int, Element] = {}
    for (shift, k), c in op.items():
        y = translate(shift, x).scale(c)
        out[k] = out[k] + y if k in out else y
    return {k: v for k, v in out.items() if v}


def apply_component(op: TranslationOperator, x: Element, k: int) -> Element:
    return apply_op(op.component(k), x).get(0, Element.zero(x.degree))


# ---------------------------------------------------------------------------
# Rel preservation


@dataclass
class PreservationReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def embedded_generators(cfg: CaseConfig, r: int, window: tuple[int, int]) -> Iterable[Element]:
    """a * g * b for every window generator g and every padding by window letters."""
    lo, hi = window
    letters = [(a, s) for a in range(lo, hi + 1) for s in cfg.signs]
    gens = rel_generators(cfg, window)
    if r < 2:
        return
    for g in gens:
        for left in range(r - 1):
            right = r - 2 - left
            for pad in itertools.product(letters, repeat=r - 2):
                a = Element.word(pad[:left])
                b = Element.word(pad[left:])
                assert len(pad[left:]) == right
                yield concat(concat(a, g), b)


def preserves_rel_check(op: TranslationOperator, cfg: CaseConfig, window: tuple[int, int] = (0, 3)) -> PreservationReport:
    rep = PreservationReport()
    comps = {k: op.component(k) for k in op.xpowers()}
    for x in embedded_generators(cfg, op.degree, window):
        for k, c in comps.items():
            y = apply_op(c, x).get(0)
            rep.checked += 1
            if y is not None:
                nf = normal_form(y, cfg)
                if nf:
                    rep.failures.append((k, x, nf))
    return rep


# ---------------------------------------------------------------------------
# T*_{k,r}: direct lattice count versus straightening


def _splittings(n0: int, chi: int, cfg: CaseConfig):
    """(n, psi1, m, l, psi2) with n + (2/gamma) m + l = n0 and psi1 eps^m psi2 = chi."""
    w = 2 // cfg.gamma
    for m in range(n0 // w + 1):
        for n in range(n0 - w * m + 1):
            l = n0 - w * m - n
            for psi1 in cfg.signs:
                psi2 = chi * psi1 * cfg.epsilon ** m if cfg.case == "S" else 1
                if (n == 0 and psi1 != 1) or (l == 0 and psi2 != 1):
                    continue
                yield n, psi1, m, l, psi2


def t_star_direct(o: OrbitType, k: int, cfg: CaseConfig) -> OrbitCombination:
    """Weighted sum over lattices pi*Lam <= L <= Lam with length(Lam/L) = k of typ(L)."""
    g = cfg.gamma
    w = 2 // g
    q = q_of(cfg)
    support = [i for i, _, _ in o.data]
    per_i = [list(_splittings(n0, c, cfg)) for _, n0, c in o.data]
    out: dict[OrbitType, Scalar] = {}
    for choice in itertools.product(*per_i):
        if sum(m + g * l for _, _, m, l, _ in choice) != k:
            continue
        expo = 0
        for a, (i, di) in enumerate(zip(support, choice)):
            for j, dj in zip(support, choice):
                if i > j:
                    expo += (di[2] + g * di[3]) * (dj[2] + g * dj[0])
        coef = q ** expo
        for n, p1, m, l, p2 in choice:
            coef = coef * count_Q(n, p1, m, l, p2, cfg)
        if not coef:
            continue
        f0: dict[int, int] = {}
        psi0: dict[int, int] = {}
        for i, (n, p1, m, l, p2) in zip(support, choice):
            for pos, mult, sg in ((i, n, p1), (i + 1, w * m, cfg.epsilon ** m if cfg.case == "S" else 1), (i + 2, l, p2)):
                f0[pos] = f0.get(pos, 0) + mult
                psi0[pos] = psi0.get(pos, 1) * sg
        orbit = OrbitType(f0, {i: (s if f0[i] else 1) for i, s in psi0.items()})
        out[orbit] = out.get(orbit, ZERO) + coef
    return OrbitCombination(out)


def orbit_representatives(o: OrbitType, cfg: CaseConfig) -> list[Element]:
    """A few word representatives delta(e, chi) whose str is ``o``."""
    e = o.descending()
    reps = [orbit_to_delta(o, cfg)]
    if cfg.case != "S":
        return reps
    first, last = [], []
    for _, n, c in o.data:
        first += [c] + [1] * (n - 1)
        last += [1] * (n - 1) + [c]
    reps.append(word_to_delta(e, first, cfg))
    reps.append(word_to_delta(e, last, cfg))
    return reps


def t_star_via_delta(o: OrbitType, k: int, cfg: CaseConfig, rep: Element | None = None) -> OrbitCombination:
    """str(Delta_{k,r}(delta(e, chi))) for a representative of ``o``."""
    x = orbit_to_delta(o, cfg) if rep is None else rep
    y = apply_component(delta_r(cfg, o.rank), x, k)
    return str_map(y, cfg)


def orbits_in_window(cfg: CaseConfig, r: int, lo: int, hi: int) -> Iterable[OrbitType]:
    for e in itertools.combinations_with_replacement(range(hi, lo - 1, -1), r):
        vals = sorted(set(e), reverse=True)
        mult = {v: e.count(v) for v in vals}
        for chis in itertools.product(*[cfg.signs for _ in vals]):
            yield OrbitType(mult, dict(zip(vals, chis)))


# ---------------------------------------------------------------------------
# the adjoint action S_k on spherical functions


def family(cfg: CaseConfig, r: int) -> tuple[TranslationOperator, int]:
    """(sum_k S_k^* x^k, alpha) for the operator family used with ``cfg``."""
    if cfg.case == "S":
        return delta_r(cfg, r), 2
    return delta_half(cfg, r), 1


@lru_cache(maxsize=1 << 16)
def _dual_nf(cfg: CaseConfig, k: int, e: Monomial) -> Element:
    op, _ = family(cfg, len(e))
    return normal_form(apply_component(op, Element.word(e), k), cfg)


def cube_words(f: Monomial, k: int, cfg: CaseConfig, alpha: int) -> Iterable[Monomial]:
    """Normal words e with e_i in [f_i - alpha, f_i] and sum(e) = sum(f) - alpha k."""
    vals = [a for a, _ in f]
    target = sum(vals) - alpha * k
    for e in itertools.product(*[range(a - alpha, a + 1) for a in vals]):
        if sum(e) != target or any(x < y for x, y in zip(e, e[1:])):
            continue
        if cfg.case != "S":
            yield tuple((a, 1) for a in e)
            continue
        for s in itertools.product((1, -1), repeat=len(e)):
            m = tuple(zip(e, s))
            if is_normal_word(m):
                yield m


@lru_cache(maxsize=1 << 16)
def _s_adjoint_word(f: Monomial, k: int, cfg: CaseConfig) -> Element:
    r = len(f)
    _, alpha = family(cfg, r)
    terms = {}
    for e in cube_words(f, k, cfg, alpha):
        c = _dual_nf(cfg, k, e).coeff(f)
        if c:
            terms[e] = c
    return Element(r, terms)


def s_adjoint_apply(f: Monomial | Element, k: int, cfg: CaseConfig) -> Element:
    """S_k applied to a normal-form word (or a normal-form Element).

    The coefficient of delta_s(e) in S_k(delta_s'(f)) is the coefficient of
    delta_s'(f) in the normal form of S_k^*(delta_s(e)).
    """
    if isinstance(f, Element):
        out = Element.zero(f.degree)
        for m, c in f.items():
            out = out + s_adjoint_apply(m, k, cfg).scale(c)
        return out
    f = tuple((int(a), int(s)) for a, s in f)
    if not is_normal_word(f):
        raise ValueError(f"{monomial_str(f)} is not a normal-form word")
    if not 0 <= k <= len(f):
        raise ValueError("need 0 <= k <= r")
    return _s_adjoint_word(f, k, cfg)


def s_r_power(x: Element, n: int, cfg: CaseConfig) -> Element:
    """S_r^n for any integer n: translation by -n alpha (1, ..., 1)."""
    _, alpha = family(cfg, x.degree)
    return translate((-n * alpha,) * x.degree, x)
