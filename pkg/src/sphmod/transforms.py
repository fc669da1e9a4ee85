"""Generating-function identities between the full and half Hecke families.

In case uH the identity is A_r(x^2) = B_r(x) B_r(-x); in case A it is
A_r(x) = B_r(x u) B_r(x / u), where u^2 = q.  Both are checked as exact
identities in the commutative algebra of translation operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeff import ONE, U, CaseConfig, Scalar, q0_of, q_of
from .hecke import TranslationOperator, WrongCase, delta_half, delta_kr

_MINUS_ONE = Scalar.const(-1)


def _check_case(cfg: CaseConfig) -> None:
    if cfg.case not in ("uH", "A"):
        raise WrongCase("transforms are defined for cases uH and A")


def _sqrt_base(cfg: CaseConfig) -> Scalar:
    """sqrt(-q0) in case uH and sqrt(q) in case A; both are u."""
    return U


def a_poly(cfg: CaseConfig, r: int) -> TranslationOperator:
    _check_case(cfg)
    out = TranslationOperator(r)
    if cfg.case == "uH":
        base = -q0_of(cfg)
        for k in range(r + 1):
            out = out + delta_kr(cfg, k, r).scale(base ** (-k * (r - k)) * _MINUS_ONE ** k) * _xk(r, k)
        return out
    for k in range(2 * r + 1):
        c = _sqrt_base(cfg) ** (-k * (2 * r - k)) * _MINUS_ONE ** k
        out = out + delta_kr(cfg, k, r).scale(c) * _xk(r, k)
    return out


def b_poly(cfg: CaseConfig, r: int) -> TranslationOperator:
    _check_case(cfg)
    base = _sqrt_base(cfg) if cfg.case == "uH" else q_of(cfg)
    half = delta_half(cfg, r)
    out = TranslationOperator(r)
    for k in range(r + 1):
        out = out + half.component(k).scale(base ** (-k * (r - k)) * _MINUS_ONE ** k) * _xk(r, k)
    return out


def _xk(r: int, k: int) -> TranslationOperator:
    return TranslationOperator(r, {((0,) * r, k): ONE})


def x_squared(op: TranslationOperator) -> TranslationOperator:
    """Substitute x -> x^2."""
    return TranslationOperator(op.degree, {(s, 2 * k): c for (s, k), c in op.items()})


def _first_difference(a: TranslationOperator, b: TranslationOperator):
    keys = set(k for k, _ in a.items()) | set(k for k, _ in b.items())
    for key in sorted(keys, key=lambda kv: (kv[1], kv[0])):
        if a.coeff(*key) != b.coeff(*key):
            return key, a.coeff(*key), b.coeff(*key)
    return None


@dataclass
class IdentityReport:
    cfg: CaseConfig
    r: int
    results: dict = field(default_factory=dict)  # name -> None or differing term

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.results.values())

    def record(self, name: str, lhs: TranslationOperator, rhs: TranslationOperator) -> None:
        self.results[name] = _first_difference(lhs, rhs)


def factorization_check(cfg: CaseConfig, r: int) -> IdentityReport:
    _check_case(cfg)
    rep = IdentityReport(cfg, r)
    b = b_poly(cfg, r)
    if cfg.case == "uH":
        lhs = x_squared(a_poly(cfg, r))
        rhs = b * b.subs_x(_MINUS_ONE)
    else:
        lhs = a_poly(cfg, r)
        rhs = b.subs_x(U) * b.subs_x(U ** -1)
    rep.record("factorization", lhs, rhs)
    return rep


def step_factors(cfg: CaseConfig, r: int) -> dict[str, TranslationOperator]:
    """The last-coordinate factors used to pass from rank r to r + 1."""
    _check_case(cfg)
    n = r + 1
    t = lambda b, xp=0, c=ONE: TranslationOperator.t_i(n, n, b, xp, c)
    u = U
    if cfg.case == "uH":
        mq0 = -q0_of(cfg)
        return {
            "A": t(2, 1, -(mq0 ** -r)) + t(0),
            "B": t(1, 1, -(u ** -r)) + t(0),
            "B+": t(1, 1, u ** -r) + t(0),
        }
    q = q_of(cfg)
    return {
        "A": t(2, 2, q ** (-2 * r)) - t(1, 1, q ** -r * (u + u ** -1)) + t(0),
        "B": t(1, 1, -(q ** -r)) + t(0),
        "B_up": t(1, 1, -(u ** (-2 * r + 1))) + t(0),
        "B_down": t(1, 1, -(u ** (-2 * r - 1))) + t(0),
    }


def recursion_check(cfg: CaseConfig, r: int) -> IdentityReport:
    """The rank-raising recursions for A and B and the one-coordinate factor identity."""
    _check_case(cfg)
    rep = IdentityReport(cfg, r)
    fac = step_factors(cfg, r)
    a_next, b_next = a_poly(cfg, r + 1), b_poly(cfg, r + 1)
    if cfg.case == "uH":
        mq0 = -q0_of(cfg)
        rep.record("A recursion", a_next, a_poly(cfg, r).subs_x(mq0).extend(r + 1) * fac["A"])
        rep.record("B recursion", b_next, b_poly(cfg, r).subs_x(U).extend(r + 1) * fac["B"])
        # in the variable x^2 on the right-hand side
        rep.record("factor identity", fac["B+"] * fac["B"], x_squared(fac["A"]))
    else:
        q = q_of(cfg)
        rep.record("A recursion", a_next, a_poly(cfg, r).subs_x(q).extend(r + 1) * fac["A"])
        rep.record("B recursion", b_next, b_poly(cfg, r).subs_x(q).extend(r + 1) * fac["B"])
        rep.record("factor identity", fac["B_up"] * fac["B_down"], fac["A"])
    return rep
