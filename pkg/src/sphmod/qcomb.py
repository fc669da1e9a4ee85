"""q-combinatorics and closed-form subspace counts over finite fields.

Every count is returned as an exact :class:`~sphmod.coeff.Scalar`; divisions
go through :func:`scalar_exact_div`, so a transcription error surfaces as
``NotDivisible`` instead of a wrong answer.
"""

from __future__ import annotations

from typing import Sequence

from .coeff import ONE, ZERO, CaseConfig, Scalar, q0_of, q_of, scalar_exact_div


def _s(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar.const(x)


def pochhammer(x: Scalar, y: Scalar, n: int) -> Scalar:
    """(x; y)_n = prod_{i=1..n} (1 - x y^{i-1})."""
    x, y = _s(x), _s(y)
    out = ONE
    p = ONE
    for _ in range(n):
        out = out * (ONE - x * p)
        p = p * y
    return out


def falling(n: int, lam: Scalar) -> Scalar:
    """(n)_lam = prod_{i=1..n} (lam^i - 1)."""
    lam = _s(lam)
    out = ONE
    p = ONE
    for _ in range(n):
        p = p * lam
        out = out * (p - ONE)
    return out


def qbinom(n: int, m: int, lam: Scalar) -> Scalar:
    if n < 0 or m < 0 or m > n:
        return ZERO
    return scalar_exact_div(falling(n, lam), falling(m, lam) * falling(n - m, lam))


def qmultinom(n: int, parts: Sequence[int], lam: Scalar) -> Scalar:
    if any(p < 0 for p in parts) or sum(parts) != n:
        return ZERO
    den = ONE
    for p in parts:
        den = den * falling(p, lam)
    return scalar_exact_div(falling(n, lam), den)


def inv_stat(f: Sequence[int]) -> int:
    n = len(f)
    return sum(1 for i in range(n) for j in range(i + 1, n) if f[i] > f[j])


def inv_tilde(f: Sequence[int]) -> int:
    n = len(f)
    return sum(max(0, f[i] - f[j]) for i in range(n) for j in range(i + 1, n))


def lambda_m(e: Sequence[int], m: int) -> int:
    return sum(1 for x in e if x == m)


def sigma(e: Sequence[int]) -> int:
    return sum(e)


# ---------------------------------------------------------------------------
# subspace counts


def e_factor(r: int, chi: int, cfg: CaseConfig) -> Scalar:
    """q^{r/2} + eps^{r/2} chi for even r, 1 for odd r."""
    if r % 2:
        return ONE
    q = q_of(cfg)
    return q ** (r // 2) + Scalar.const(cfg.epsilon ** (r // 2) * chi)


def _lam(cfg: CaseConfig) -> Scalar:
    """The base of the q-binomials in cases uH (-q0) and A (q^2)."""
    if cfg.case == "uH":
        return -q0_of(cfg)
    return q_of(cfg) ** 2


def card_H(r: int, chi: int, cfg: CaseConfig) -> Scalar:
    """Order of the isometry group of a form of type (r, chi).

    In case uH the product (-q0)^{C(r,2)} (r)_{-q0} equals (-1)^r |U_r|, so the
    sign is corrected here; ratios of orders are unaffected.
    """
    q = q_of(cfg)
    if cfg.case == "uH":
        lam = -q0_of(cfg)
        return Scalar.const((-1) ** r) * lam ** (r * (r - 1) // 2) * falling(r, lam)
    if cfg.case == "A":
        return q ** (r * r) * falling(r, q ** 2)
    h = r // 2
    num = Scalar.const(2) * q ** (h * ((r - 1) // 2)) * falling(h, q ** 2)
    return scalar_exact_div(num, e_factor(r, chi, cfg))


def _valid_typ(d: int, chi: int) -> bool:
    return d > 0 or chi == 1


def count_R(a: int, eta: int, r: int, chi: int, cfg: CaseConfig) -> Scalar:
    """Number of nondegenerate subspaces of type (a, eta) in a space of type (r, chi)."""
    if not 0 <= a <= r:
        raise ValueError("need 0 <= a <= r")
    if cfg.case != "S":
        lam = _lam(cfg)
        return lam ** (a * (r - a)) * qbinom(r, a, lam)
    if not _valid_typ(a, eta) or not _valid_typ(r - a, chi * eta):
        return ZERO
    q = q_of(cfg)
    q2 = q ** 2
    num = (
        q ** ((a * (r - a)) // 2)
        * falling(r // 2, q2)
        * e_factor(a, eta, cfg)
        * e_factor(r - a, chi * eta, cfg)
    )
    den = Scalar.const(2) * falling(a // 2, q2) * falling((r - a) // 2, q2) * e_factor(r, chi, cfg)
    return scalar_exact_div(num, den)


def count_S(b: int, r: int, chi: int, cfg: CaseConfig) -> Scalar:
    """Number of b-dimensional isotropic subspaces in a space of type (r, chi)."""
    if not 0 <= b <= r:
        raise ValueError("need 0 <= b <= r")
    q = q_of(cfg)
    if cfg.case == "uH":
        q0 = q0_of(cfg)
        return pochhammer(-q0, q0 ** 2, b) * qbinom(r, 2 * b, -q0)
    if cfg.case == "A":
        return pochhammer(-q, q, b) * qbinom(r, b, q ** 2)
    if 2 * b > r:
        return ZERO
    num = pochhammer(-q, q, b) * qbinom(r // 2, b, q ** 2) * e_factor(r - 2 * b, chi * cfg.epsilon ** b, cfg)
    return scalar_exact_div(num, e_factor(r, chi, cfg))


def count_Q(n: int, psi1: int, m: int, l: int, psi2: int, cfg: CaseConfig) -> Scalar:
    """Number of N with dim(N cap N^perp) = m and typ(N / rad) = (n, psi1).

    The ambient type is (r, chi) with r = n + (2/gamma) m + l and
    chi = psi1 eps^m psi2.
    """
    if min(n, m, l) < 0:
        return ZERO
    if not _valid_typ(n, psi1) or not _valid_typ(l, psi2):
        return ZERO
    g = cfg.gamma
    r = n + (2 // g) * m + l
    q = q_of(cfg)
    if cfg.case == "uH":
        lam = -q0_of(cfg)
        num = Scalar.const((-1) ** m) * lam ** (n * l) * falling(r, lam)
        den = falling(n, lam) * falling(m, q0_of(cfg) ** 2) * falling(l, lam)
        return scalar_exact_div(num, den)
    if cfg.case == "A":
        q2 = q ** 2
        num = q ** (2 * n * l) * falling(r, q2)
        den = falling(n, q2) * falling(m, q) * falling(l, q2)
        return scalar_exact_div(num, den)
    chi = psi1 * cfg.epsilon ** m * psi2
    q2 = q ** 2
    num = q ** ((n * l) // 2) * falling(r // 2, q2) * e_factor(n, psi1, cfg) * e_factor(l, psi2, cfg)
    den = (
        Scalar.const(2)
        * falling(n // 2, q2)
        * falling(m, q)
        * falling(l // 2, q2)
        * e_factor(r, chi, cfg)
    )
    return scalar_exact_div(num, den)


def count_Q_via_SR(n: int, psi1: int, m: int, l: int, psi2: int, cfg: CaseConfig) -> Scalar:
    """count_S(m; r, chi) * count_R(n, psi1; r - (2/gamma) m, eps^m chi)."""
    r = n + (2 // cfg.gamma) * m + l
    chi = psi1 * cfg.epsilon ** m * psi2
    if not _valid_typ(n, psi1) or not _valid_typ(l, psi2):
        return ZERO
    rr = r - (2 // cfg.gamma) * m
    return count_S(m, r, chi, cfg) * count_R(n, psi1, rr, cfg.epsilon ** m * chi, cfg)
