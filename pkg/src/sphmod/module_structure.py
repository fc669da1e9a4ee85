"""Free-module structure of spherical functions over the Hecke operators S_1..S_r, S_r^{-1}.

Words are compared by the centered lexicographic preorder; the S-monomial
images of the finite basis are unitriangular against normal-form words, which
drives the greedy expansion in :func:`expand_in_basis`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .coeff import ONE, ZERO, CaseConfig, Scalar, format_scalar
from .hecke import family, s_adjoint_apply, s_r_power
from .straighten import DEFAULT_FUEL, FuelExhausted, normal_form
from .typmon import Element, Monomial, is_normal_word, monomial_str, normal_words

LESS, EQUIV, GREATER = -1, 0, 1


def precedes(e: Sequence[int], f: Sequence[int]) -> int:
    """Compare e and f by the centered lexicographic preorder.

    Returns LESS, EQUIV or GREATER.  Centering is done by comparing
    r*e_j - sum(e) so everything stays integral.
    """
    if len(e) != len(f):
        raise ValueError("vectors of different length")
    r = len(e)
    se, sf = sum(e), sum(f)
    for a, b in zip(e, f):
        x, y = r * a - se, r * b - sf
        if x != y:
            return LESS if x < y else GREATER
    return EQUIV


def _key(m: Monomial) -> tuple:
    r = len(m)
    s = sum(a for a, _ in m)
    return tuple(r * a - s for a, _ in m)


@dataclass(frozen=True, order=True)
class BasisWord:
    e: tuple[int, ...]
    s: tuple[int, ...]

    @property
    def monomial(self) -> Monomial:
        return tuple(zip(self.e, self.s))

    def __str__(self):
        return monomial_str(self.monomial)


def _sign_gaps(s: Sequence[int]) -> list[int]:
    return [1 if a != b else 0 for a, b in zip(s, s[1:])]


def basis_set(cfg: CaseConfig, r: int) -> list[BasisWord]:
    if r < 1:
        raise ValueError("r >= 1 required")
    _, alpha = family(cfg, r)
    signs = itertools.product((1, -1), repeat=r) if cfg.case == "S" else [(1,) * r]
    out = []
    for s in signs:
        d = _sign_gaps(s)
        for last in range(alpha):
            for extra in itertools.product(range(alpha), repeat=r - 1):
                e = [last]
                for di, x in zip(reversed(d), reversed(extra)):
                    e.append(e[-1] + di + x)
                e = tuple(reversed(e))
                w = BasisWord(e, tuple(s))
                if normal_form(Element.word(w.monomial), cfg):
                    out.append(w)
    return sorted(out)


def rank_report(cfg: CaseConfig, r: int) -> int:
    n = len(basis_set(cfg, r))
    expected = 4 ** r if cfg.case == "S" else 1
    if n != expected:
        raise AssertionError(f"basis has {n} elements, expected {expected}")
    return n


def s_k_vector(r: int, k: int, alpha: int) -> tuple[int, ...]:
    return (0,) * (r - k) + (alpha,) * k


@dataclass
class LeadingReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def leading_term_check(cfg: CaseConfig, r: int, window: tuple[int, int] = (0, 5)) -> LeadingReport:
    """S_k(delta_s(f)) = delta_s(s_k(f)) + strictly smaller terms, for normal words f in the window."""
    _, alpha = family(cfg, r)
    rep = LeadingReport()
    for f in normal_words(cfg, r, *window):
        for k in range(r + 1):
            img = s_adjoint_apply(f, k, cfg)
            sub = s_k_vector(r, k, alpha)
            lead = tuple((a - d, s) for (a, s), d in zip(f, sub))
            ok = img.coeff(lead) == ONE
            lk = _key(lead)
            for m in img.keys():
                if m != lead and not _key(m) < lk:
                    ok = False
            rep.checked += 1
            if not ok:
                rep.failures.append((f, k, img))
    return rep


# ---------------------------------------------------------------------------
# expansion


HeckeMonomial = tuple[int, ...]  # exponents (a_1, ..., a_r), a_r may be negative


def locate(m: Monomial, cfg: CaseConfig) -> tuple[BasisWord, HeckeMonomial]:
    """The basis word f and exponents a with S^a(delta_s(f)) = delta_s(e) + lower terms."""
    r = len(m)
    _, alpha = family(cfg, r)
    e = [a for a, _ in m]
    s = tuple(x for _, x in m) if cfg.case == "S" else (1,) * r
    d = _sign_gaps(s)
    a = [0] * r
    gaps = []
    for i in range(r - 1):
        g = e[i] - e[i + 1] - d[i]
        if g < 0:
            raise ValueError(f"{monomial_str(m)} is not a nonzero normal word")
        a[r - 2 - i] = g // alpha
        gaps.append(d[i] + g % alpha)
    fr = e[-1] % alpha
    f = [fr]
    for gp in reversed(gaps):
        f.append(f[-1] + gp)
    f = tuple(reversed(f))
    total = (f[-1] - e[-1]) // alpha
    a[r - 1] = total - sum(a[: r - 1])
    return BasisWord(f, s), tuple(a)


def apply_hecke_monomial(x: Element, a: HeckeMonomial, cfg: CaseConfig) -> Element:
    """S_1^{a_1} ... S_{r-1}^{a_{r-1}} S_r^{a_r} applied to a normal-form element."""
    r = x.degree
    y = s_r_power(x, a[r - 1], cfg)
    for k in range(r - 1, 0, -1):
        for _ in range(a[k - 1]):
            y = s_adjoint_apply(y, k, cfg)
    return y


Expansion = dict  # BasisWord -> {HeckeMonomial: Scalar}


def expand_in_basis(x: Element, cfg: CaseConfig, fuel: int = 10_000) -> Expansion:
    """Write x = sum_f P_f(S) delta_s(f) over the basis by triangular elimination."""
    x = normal_form(x, cfg)
    rem = x
    out: Expansion = {}
    steps = 0
    while rem:
        steps += 1
        if steps > fuel:
            raise FuelExhausted("expansion did not terminate within its fuel")
        m = max(rem.keys(), key=lambda w: (_key(w), sum(a for a, _ in w)))
        c = rem.coeff(m)
        f, a = locate(m, cfg)
        img = apply_hecke_monomial(Element.word(f.monomial), a, cfg)
        lead = img.coeff(m)
        if lead != ONE:
            raise AssertionError(f"leading coefficient {lead} != 1 at {monomial_str(m)}")
        rem = rem - img.scale(c)
        poly = out.setdefault(f, {})
        v = poly.get(a, ZERO) + c
        if v:
            poly[a] = v
        else:
            poly.pop(a, None)
            if not poly:
                del out[f]
    return out


def reexpand(exp: Expansion, r: int, cfg: CaseConfig) -> Element:
    total = Element.zero(r)
    for f, poly in exp.items():
        base = Element.word(f.monomial)
        for a, c in poly.items():
            total = total + apply_hecke_monomial(base, a, cfg).scale(c)
    return total


def expansion_to_json(exp: Expansion) -> list:
    return [
        {
            "basis_word": str(f),
            "terms": [{"exponents": list(a), "coeff": format_scalar(c)} for a, c in sorted(poly.items())],
        }
        for f, poly in sorted(exp.items())
    ]


@dataclass
class RoundTripReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def round_trip_check(cfg: CaseConfig, r: int, window: tuple[int, int] = (0, 5)) -> RoundTripReport:
    rep = RoundTripReport()
    for m in normal_words(cfg, r, *window):
        x = Element.word(m)
        try:
            exp = expand_in_basis(x, cfg)
            ok = reexpand(exp, r, cfg) == x
        except FuelExhausted as exc:
            exp, ok = exc, False
        rep.checked += 1
        if not ok:
            rep.failures.append((m, exp))
    return rep
