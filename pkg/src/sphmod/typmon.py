"""The graded type monoid Typ = (Z x Sign)^*, its linear span, and orbit types.

Letters are pairs ``(a, s)``.  Inside an :class:`Element` the sign component is
read in the character (delta_s) coordinates: ``s = +1`` is the trivial
character of Sign and ``s = -1`` the nontrivial one.  In cases uH and A the
group Sign is trivial and every ``s`` is ``+1``.
"""

from __future__ import annotations

import itertools
import json
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .coeff import ONE, ZERO, CaseConfig, Scalar, format_scalar, parse_scalar

Letter = tuple[int, int]
Monomial = tuple[Letter, ...]


class NotDescending(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


def _as_scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar.const(c)


class _Combination:
    """Sparse map key -> Scalar with no zero values stored."""

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                c = _as_scalar(c)
                if c:
                    prev = t.get(k)
                    c = c if prev is None else prev + c
                    if c:
                        t[k] = c
                    else:
                        t.pop(k, None)
        self._t = t

    def _new(self, t):
        out = object.__new__(type(self))
        out._t = t
        self._copy_meta(out)
        return out

    def _copy_meta(self, other):
        pass

    def items(self):
        return self._t.items()

    def keys(self):
        return self._t.keys()

    def coeff(self, key) -> Scalar:
        return self._t.get(key, ZERO)

    def __getitem__(self, key) -> Scalar:
        return self.coeff(key)

    def __len__(self):
        return len(self._t)

    def __iter__(self):
        return iter(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self):
        return not self._t

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self, other):
        self._check(other)
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k)
            if v is None:
                t[k] = c
            else:
                v = v + c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return self._new(t)

    def __neg__(self):
        return self._new({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_Combination":
        c = _as_scalar(c)
        if not c:
            return self._new({})
        t = {}
        for k, v in self._t.items():
            w = v * c
            if w:
                t[k] = w
        return self._new(t)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction, Scalar)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))


# ---------------------------------------------------------------------------
# Elements of R[Typ_r]


class Element(_Combination):
    """Homogeneous element of R[Typ_r] in delta_s coordinates."""

    __slots__ = ("degree",)

    def __init__(self, degree: int, terms=None):
        super().__init__(terms)
        self.degree = degree
        for m in self._t:
            if len(m) != degree:
                raise DegreeMismatch(f"monomial {m} has length {len(m)} != {degree}")

    def _copy_meta(self, other):
        other.degree = self.degree

    def _check(self, other):
        super()._check(other)
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")

    @classmethod
    def word(cls, m: Iterable[Letter], c=ONE) -> "Element":
        m = tuple((int(a), int(s)) for a, s in m)
        return cls(len(m), {m: c})

    @classmethod
    def zero(cls, degree: int) -> "Element":
        return cls(degree)

    @classmethod
    def unit(cls) -> "Element":
        return cls(0, {(): ONE})

    def __mul__(self, other):
        if isinstance(other, Element):
            return concat(self, other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        if not self._t:
            return f"Element({self.degree}, 0)"
        parts = [f"({format_scalar(c)})*{monomial_str(m)}" for m, c in sorted(self._t.items())]
        return f"Element({self.degree}, " + " + ".join(parts) + ")"


def concat(a: Element, b: Element) -> Element:
    """Bilinear extension of word concatenation."""
    t: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma + mb
            c = ca * cb
            prev = t.get(m)
            t[m] = c if prev is None else prev + c
    return Element(a.degree + b.degree, {m: c for m, c in t.items() if c})


def translate(eps: Sequence[int], x: Element) -> Element:
    eps = tuple(eps)
    if len(eps) != x.degree:
        raise DegreeMismatch(f"shift of length {len(eps)} applied to degree {x.degree}")
    t = {}
    for m, c in x.items():
        t[tuple((a + d, s) for (a, s), d in zip(m, eps))] = c
    out = object.__new__(Element)
    out._t = t
    out.degree = x.degree
    return out


def sigma(m: Monomial) -> int:
    return sum(a for a, _ in m)


def is_normal_word(m: Monomial, cfg: CaseConfig | None = None) -> bool:
    """Weakly descending in ``a`` with constant sign on equal-``a`` blocks."""
    for (a, s), (b, t) in zip(m, m[1:]):
        if a < b or (a == b and s != t):
            return False
    return True


def monomial_str(m: Monomial) -> str:
    return "".join(f"({a},{'+' if s > 0 else '-'})" for a, s in m)


_LETTER = re.compile(r"\(\s*(-?\d+)\s*,\s*([+-])\s*1?\s*\)")


def parse_monomial(text: str) -> Monomial:
    text = text.strip()
    out = []
    pos = 0
    while pos < len(text):
        m = _LETTER.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse monomial {text!r} at position {pos}")
        out.append((int(m.group(1)), 1 if m.group(2) == "+" else -1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tuple(out)


def _sign_char(s) -> int:
    if s in ("+", "+1", 1):
        return 1
    if s in ("-", "-1", -1):
        return -1
    raise ValueError(f"bad sign {s!r}")


def element_to_json(x: Element, cfg: CaseConfig) -> dict:
    terms = [
        {"monomial": [[a, "+" if s > 0 else "-"] for a, s in m], "coeff": format_scalar(c)}
        for m, c in sorted(x.items())
    ]
    return {"case": cfg.case, "epsilon": cfg.epsilon, "r": x.degree, "terms": terms}


def element_from_json(obj: Mapping) -> tuple[Element, CaseConfig]:
    try:
        cfg = CaseConfig(obj["case"], int(obj.get("epsilon", 1)))
        r = int(obj["r"])
        terms = {}
        for term in obj["terms"]:
            m = tuple((int(a), _sign_char(s)) for a, s in term["monomial"])
            if cfg.case != "S" and any(s != 1 for _, s in m):
                raise ValueError(f"sign characters must be + in case {cfg.case}")
            c = parse_scalar(str(term["coeff"]))
            terms[m] = terms.get(m, ZERO) + c
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed element JSON: {exc}") from exc
    return Element(r, terms), cfg


def dumps_element(x: Element, cfg: CaseConfig) -> str:
    return json.dumps(element_to_json(x, cfg), indent=2)


# ---------------------------------------------------------------------------
# Orbit types (Typ^0)


class OrbitType:
    """Finitely supported pair (e0, chi0); a K-orbit on X.

    Stored as a tuple of ``(i, e0(i), chi0(i))`` sorted by decreasing ``i``,
    only for ``e0(i) > 0``.
    """

    __slots__ = ("data",)

    def __init__(self, e0: Mapping[int, int], chi0: Mapping[int, int] | None = None):
        chi0 = chi0 or {}
        data = []
        for i, n in e0.items():
            if n < 0:
                raise ValueError("e0 takes non-negative values")
            if n == 0:
                if chi0.get(i, 1) != 1:
                    raise ValueError(f"chi0({i}) must be +1 where e0({i}) = 0")
                continue
            c = chi0.get(i, 1)
            if c not in (1, -1):
                raise ValueError("chi0 takes values +-1")
            data.append((i, n, c))
        for i, c in chi0.items():
            if c != 1 and e0.get(i, 0) == 0:
                raise ValueError(f"chi0({i}) must be +1 where e0({i}) = 0")
        self.data = tuple(sorted(data, reverse=True))

    @property
    def e0(self) -> dict[int, int]:
        return {i: n for i, n, _ in self.data}

    @property
    def chi0(self) -> dict[int, int]:
        return {i: c for i, _, c in self.data}

    @property
    def rank(self) -> int:
        return sum(n for _, n, _ in self.data)

    @property
    def weight(self) -> int:
        """Sum_i i * e0(i)."""
        return sum(i * n for i, n, _ in self.data)

    def descending(self) -> tuple[int, ...]:
        return tuple(i for i, n, _ in self.data for _ in range(n))

    def __eq__(self, other):
        return isinstance(other, OrbitType) and self.data == other.data

    def __lt__(self, other):
        return self.data < other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        body = ", ".join(f"{i}:{n}{'+' if c > 0 else '-'}" for i, n, c in self.data)
        return f"OrbitType({{{body}}})"

    def to_json(self) -> dict:
        return {
            "e0": {str(i): n for i, n, _ in self.data},
            "chi0": {str(i): ("+" if c > 0 else "-") for i, _, c in self.data},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "OrbitType":
        e0 = {int(i): int(n) for i, n in obj["e0"].items()}
        chi0 = {int(i): _sign_char(c) for i, c in obj.get("chi0", {}).items()}
        return cls(e0, chi0)


class OrbitCombination(_Combination):
    """Scalar-weighted finite sum of orbit types (an element of R[Typ^0_r])."""

    __slots__ = ()

    def __repr__(self):
        if not self._t:
            return "OrbitCombination(0)"
        parts = [f"({format_scalar(c)})*{o!r}" for o, c in sorted(self._t.items())]
        return "OrbitCombination(" + " + ".join(parts) + ")"

    def to_json(self) -> list:
        return [{"orbit": o.to_json(), "coeff": format_scalar(c)} for o, c in sorted(self._t.items())]


def orbit_of_descending(m: Sequence[tuple[int, int]]) -> OrbitType:
    """str of a descending word delta(e, chi) given in the chi (not character) coordinates."""
    e0: dict[int, int] = {}
    chi0: dict[int, int] = {}
    prev = None
    for a, s in m:
        if prev is not None and a > prev:
            raise NotDescending(f"{monomial_str(tuple(m))} is not weakly descending")
        prev = a
        e0[a] = e0.get(a, 0) + 1
        chi0[a] = chi0.get(a, 1) * s
    return OrbitType(e0, chi0)


def _blocks(e: Sequence[int]) -> list[tuple[int, int]]:
    """Runs of equal values as (start, length)."""
    out = []
    i = 0
    while i < len(e):
        j = i
        while j < len(e) and e[j] == e[i]:
            j += 1
        out.append((i, j - i))
        i = j
    return out


def word_to_delta(e: Sequence[int], chi: Sequence[int], cfg: CaseConfig) -> Element:
    """delta(e, chi) = #Sign^{-r} sum_s s(chi) delta_s(e), unreduced."""
    r = len(e)
    if cfg.case != "S":
        return Element.word(zip(e, [1] * r))
    w = Fraction(1, 2 ** r)
    terms = {}
    for s in itertools.product((1, -1), repeat=r):
        val = 1
        for si, ci in zip(s, chi):
            if si < 0:
                val *= ci
        terms[tuple(zip(e, s))] = Scalar.const(w * val)
    return Element(r, terms)


def orbit_to_delta(o: OrbitType, cfg: CaseConfig) -> Element:
    """Class of the orbit's indicator in the normal-form delta_s basis."""
    e = o.descending()
    r = len(e)
    if cfg.case != "S":
        if any(c != 1 for _, _, c in o.data):
            raise ValueError(f"orbit {o} has a nontrivial sign in case {cfg.case}")
        return Element.word(zip(e, [1] * r))
    w = Fraction(1, 2 ** r)
    terms = {}
    for bsigns in itertools.product((1, -1), repeat=len(o.data)):
        val = 1
        s = []
        for (i, n, c), b in zip(o.data, bsigns):
            if b < 0:
                val *= c
            s.extend([b] * n)
        terms[tuple(zip(e, s))] = Scalar.const(w * val)
    return Element(r, terms)


def delta_to_orbit(x: Element, cfg: CaseConfig) -> OrbitCombination:
    """Inverse of :func:`orbit_to_delta` on normal-form elements."""
    out: dict[OrbitType, Scalar] = {}
    for m, c in x.items():
        if not is_normal_word(m):
            raise ValueError(f"{monomial_str(m)} is not a normal-form word")
        e = tuple(a for a, _ in m)
        if cfg.case != "S":
            o = orbit_of_descending([(a, 1) for a in e])
            out[o] = out.get(o, ZERO) + c
            continue
        blocks = _blocks(e)
        # delta_s(e) = 2^{r - #blocks} sum_psi prod_b s_b(psi_b) (e, psi)
        w = c * Scalar.const(2 ** (len(e) - len(blocks)))
        bs = [m[start][1] for start, _ in blocks]
        for psi in itertools.product((1, -1), repeat=len(blocks)):
            val = 1
            for sb, p in zip(bs, psi):
                if sb < 0:
                    val *= p
            o = OrbitType({e[st]: ln for st, ln in blocks}, {e[st]: p for (st, _), p in zip(blocks, psi)})
            out[o] = out.get(o, ZERO) + (w if val > 0 else -w)
    return OrbitCombination(out)


def pair(x: Element, y: Element, cfg: CaseConfig) -> Scalar:
    """Normalized pairing in which normal-form delta_s words are orthonormal."""
    if x.degree != y.degree:
        raise DegreeMismatch(f"degrees {x.degree} and {y.degree} differ")
    if len(x) > len(y):
        x, y = y, x
    out = ZERO
    for m, c in x.items():
        d = y.coeff(m)
        if d:
            out = out + c * d
    return out


def normal_words(cfg: CaseConfig, r: int, lo: int, hi: int) -> Iterator[Monomial]:
    """All normal-form words of length r with entries in [lo, hi]."""
    for e in itertools.combinations_with_replacement(range(hi, lo - 1, -1), r):
        yield from words_over(e, cfg)


def words_over(e: Sequence[int], cfg: CaseConfig) -> Iterator[Monomial]:
    """Normal-form words with the descending value vector ``e``."""
    if cfg.case != "S":
        yield tuple((a, 1) for a in e)
        return
    blocks = _blocks(e)
    for bs in itertools.product((1, -1), repeat=len(blocks)):
        s = []
        for (_, ln), b in zip(blocks, bs):
            s.extend([b] * ln)
        yield tuple(zip(e, s))
