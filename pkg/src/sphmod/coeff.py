"""Exact scalars: Laurent polynomials in one variable ``u`` over the dyadic rationals.

All three cases share this ring.  The residue cardinalities are encoded as

    q  = u^2        (cases S, A)
    q0 = -u^2       (case uH, so q = q0^2 = u^4)

which makes ``sqrt(q)`` (case A) and ``sqrt(-q0)`` (case uH) equal to ``u``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "CaseConfig",
    "NotDivisible",
    "OddExponent",
    "NotDyadic",
    "Scalar",
    "ZERO",
    "ONE",
    "U",
    "dyadic_parts",
    "scalar_add",
    "scalar_mul",
    "scalar_neg",
    "scalar_exact_div",
    "scalar_eval_q",
    "parse_scalar",
    "q_of",
    "q0_of",
]


class NotDivisible(ArithmeticError):
    """No exact Laurent quotient with dyadic coefficients exists."""


class OddExponent(ValueError):
    """An odd power of ``u`` reached a place that needs an element of Z[1/2][q^{+-1}]."""


class NotDyadic(ValueError):
    pass


def _is_dyadic(c: Fraction) -> bool:
    d = c.denominator
    return d & (d - 1) == 0


def dyadic_parts(c) -> tuple[int, int]:
    """Canonical ``(numerator, exponent2)`` with ``c == numerator / 2**exponent2``."""
    c = Fraction(c)
    if not _is_dyadic(c):
        raise NotDyadic(f"{c} is not a dyadic rational")
    if c == 0:
        return 0, 0
    return c.numerator, c.denominator.bit_length() - 1


Number = Union[int, Fraction]


class Scalar:
    """Immutable sparse Laurent polynomial ``sum c_k u^k``."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        t = {}
        if terms:
            for k, c in terms.items():
                if c:
                    c = c if isinstance(c, Fraction) else Fraction(c)
                    if c.denominator != 1 and not _is_dyadic(c):
                        raise NotDyadic(f"coefficient {c} is not dyadic")
                    t[k] = c
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t: dict) -> "Scalar":
        s = object.__new__(cls)
        s._t = t
        s._h = None
        return s

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "Scalar":
        return cls({k: c})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_even(self) -> bool:
        return all(k % 2 == 0 for k in self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant(self) -> Fraction:
        return self._t.get(0, Fraction(0))

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    # -- ring operations --------------------------------------------------
    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar.const(x)
        return NotImplemented

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return other
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k)
            if v is None:
                t[k] = c
            else:
                v += c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return Scalar._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Scalar._raw({k: c * other for k, c in self._t.items()})
        if not isinstance(other, Scalar):
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return ZERO
        if len(a) == 1 and len(b) == 1:
            (ka, ca), = a.items()
            (kb, cb), = b.items()
            return Scalar._raw({ka + kb: ca * cb})
        t: dict[int, Fraction] = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                t[k] = t.get(k, 0) + ca * cb
        return Scalar._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._t) != 1:
                raise NotDivisible(f"{self} is not a unit of the Laurent ring")
            (k, c), = self._t.items()
            inv = 1 / c
            if not _is_dyadic(inv):
                raise NotDivisible(f"{self} is not a unit of the Laurent ring")
            return Scalar._raw({k * n: inv ** (-n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return other
        return scalar_exact_div(self, other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def subs_u(self, c: "Scalar") -> "Scalar":
        """Substitute ``u -> c`` (``c`` must be a unit if negative powers occur)."""
        out = ZERO
        for k, v in self._t.items():
            out = out + (c ** k) * v
        return out

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar()
ONE = Scalar.const(1)
U = Scalar.monomial(1)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_neg(a: Scalar) -> Scalar:
    return -a


def scalar_exact_div(a: Scalar, b: Scalar) -> Scalar:
    """Return ``c`` with ``b * c == a``; raise NotDivisible otherwise."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero scalar")
    if a.is_zero():
        return ZERO
    lb, la = b.min_exp(), a.min_exp()
    # shift both to ordinary polynomials with nonzero constant term
    num = {k - la: c for k, c in a.items()}
    den = {k - lb: c for k, c in b.items()}
    dd = max(den)
    lead = den[dd]
    quo: dict[int, Fraction] = {}
    while num:
        top = max(num)
        if top < dd:
            raise NotDivisible(f"({a}) / ({b}) leaves a remainder")
        c = num[top] / lead
        if not _is_dyadic(c):
            raise NotDivisible(f"({a}) / ({b}) needs a non-dyadic coefficient {c}")
        shift = top - dd
        quo[shift] = c
        for k, v in den.items():
            kk = k + shift
            w = num.get(kk, 0) - c * v
            if w:
                num[kk] = w
            else:
                num.pop(kk, None)
    off = la - lb
    return Scalar._raw({k + off: c for k, c in quo.items()})


def scalar_eval_q(a: Scalar, qval, case: str = "S") -> Fraction:
    """Evaluate an even scalar at a concrete prime power.

    For cases S and A, ``u^2 -> qval``; for case uH ``qval`` is ``q0`` and
    ``u^2 -> -q0``.
    """
    qval = Fraction(qval)
    base = -qval if case == "uH" else qval
    total = Fraction(0)
    for k, c in a.items():
        if k % 2:
            raise OddExponent(f"u^{k} in {a} has no meaning at a specialization")
        total += c * base ** (k // 2)
    return total


# -- case configuration ------------------------------------------------------

CASES = ("uH", "S", "A")


@dataclass(frozen=True)
class CaseConfig:
    case: str
    epsilon: int = 1
    gamma: int = 0  # 0 -> filled in from case

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}; expected one of {CASES}")
        g = 2 if self.case == "A" else 1
        if self.gamma == 0:
            object.__setattr__(self, "gamma", g)
        elif self.gamma != g:
            raise ValueError(f"gamma must be {g} in case {self.case}")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if self.case != "S" and self.epsilon != 1:
            raise ValueError("epsilon is +1 unless case = S")

    @property
    def signs(self) -> tuple[int, ...]:
        """The character group of Sign, as +-1 labels."""
        return (1, -1) if self.case == "S" else (1,)

    @property
    def nsign(self) -> int:
        return 2 if self.case == "S" else 1

    @property
    def q(self) -> Scalar:
        return q_of(self)

    def __str__(self):
        if self.case == "S":
            return f"S(eps={self.epsilon:+d})"
        return self.case


def q_of(cfg: CaseConfig) -> Scalar:
    """Residue field size of O_F: u^4 in case uH, u^2 otherwise."""
    return Scalar.monomial(4) if cfg.case == "uH" else Scalar.monomial(2)


def q0_of(cfg: CaseConfig) -> Scalar:
    if cfg.case != "uH":
        raise ValueError("q0 is only defined in case uH")
    return Scalar.monomial(2, -1)


# -- text format -------------------------------------------------------------

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(a: Scalar) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for k in sorted(a.terms):
        c = a.terms[k]
        neg = c < 0
        c = abs(c)
        if k == 0:
            body = _fmt_coeff(c)
        else:
            var = "u" if k == 1 else f"u^{k}"
            body = var if c == 1 else f"{_fmt_coeff(c)}*{var}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*)?)?
        (?P<var>u(?:\s*\^\s*(?P<exp>[+-]?\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_scalar(text: str) -> Scalar:
    """Inverse of ``format_scalar``; accepts e.g. ``"1/2*u^-2 + 1 - u^4"``."""
    if isinstance(text, (int, Fraction)):
        return Scalar.const(text)
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    pos = 0
    terms: dict[int, Fraction] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        first = False
        c = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            c = -c
        if m.group("var"):
            k = int(m.group("exp")) if m.group("exp") is not None else 1
        else:
            k = 0
        terms[k] = terms.get(k, 0) + c
        pos = m.end()
    return Scalar(terms)


def scalar_sum(xs: Iterable[Scalar]) -> Scalar:
    out = ZERO
    for x in xs:
        out = out + x
    return out
