"""Brute-force subspace counts in small hermitian, symmetric and alternating spaces."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..coeff import CaseConfig, scalar_eval_q
from ..qcomb import count_Q, count_R, count_S
from .fields import GF, Matrix, diagonalize_symmetric, field as get_field, rref_subspaces


class Degenerate(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


SUBSPACE_BUDGET = 500_000


def epsilon_for(p: int) -> int:
    """(-1)^((q-1)/2): +1 iff -1 is a square in F_p."""
    return 1 if p % 4 == 1 else -1


@dataclass(frozen=True)
class FormSpace:
    cfg: CaseConfig
    F: GF
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = [list(r) for r in self.gram]
        n = len(g)
        F = self.F
        for i in range(n):
            for j in range(n):
                if self.cfg.case == "uH":
                    ok = g[i][j] == F.conj(g[j][i])
                elif self.cfg.case == "S":
                    ok = g[i][j] == g[j][i]
                else:
                    ok = g[i][j] == F.neg(g[j][i]) and (i != j or g[i][i] == 0)
                if not ok:
                    raise ValueError(f"gram matrix does not have the {self.cfg.case} symmetry")

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def conjugate(self) -> bool:
        return self.cfg.case == "uH"


def restricted_gram(fs: FormSpace, rows: Matrix) -> Matrix:
    F = fs.F
    if not rows:
        return []
    return F.matmul(F.matmul(rows, [list(r) for r in fs.gram]), F.conj_transpose(rows, fs.conjugate))


def classify(fs: FormSpace, G: Matrix) -> tuple[int, int, int]:
    return classify_form(fs.cfg, fs.F, G)


def classify_form(cfg: CaseConfig, F: GF, G: Matrix) -> tuple[int, int, int]:
    """(radical dimension, typ dimension, typ sign) of a possibly degenerate form."""
    k = len(G)
    if k == 0:
        return 0, 0, 1
    if cfg.case == "S":
        diag = diagonalize_symmetric(F, G)
        nz = [d for d in diag if d]
        prod = 1
        for d in nz:
            prod = F.mul(prod, d)
        sign = F.legendre(prod) if nz else 1
        return k - len(nz), len(nz), sign
    rk = F.rank(G)
    return k - rk, rk // cfg.gamma, 1


def typ_of_form(fs: FormSpace) -> tuple[int, int]:
    rad, d, sign = classify(fs, [list(r) for r in fs.gram])
    if rad:
        raise Degenerate("the form has a nonzero radical")
    return d, sign


def brute_counts(fs: FormSpace) -> dict:
    """Tally every subspace W by isotropy, nondegeneracy and (radical, quotient type)."""
    F = fs.F
    n = fs.dim
    from .fields import gaussian_binomial

    total = sum(gaussian_binomial(n, k, F.q) for k in range(n + 1))
    if total > SUBSPACE_BUDGET:
        raise BudgetExceeded(f"{total} subspaces exceed the budget {SUBSPACE_BUDGET}")
    S, R, Q = Counter(), Counter(), Counter()
    for k in range(n + 1):
        for rows in rref_subspaces(F, n, k):
            G = restricted_gram(fs, rows)
            rad, d, sign = classify(fs, G)
            if rad == k:
                S[k] += 1
            if rad == 0:
                R[(d, sign)] += 1
            Q[(d, sign, rad)] += 1
    return {"S": dict(S), "R": dict(R), "Q": dict(Q)}


def _qval(fs: FormSpace) -> int:
    return fs.F.p


def formula_counts(fs: FormSpace) -> dict:
    """The closed-form counts specialised at this field, over the same index sets."""
    cfg = fs.cfg
    r, chi = typ_of_form(fs)
    qv = _qval(fs)
    ev = lambda x: scalar_eval_q(x, qv, cfg.case)
    g = cfg.gamma
    w = 2 // g
    S = {b: ev(count_S(b, r, chi, cfg)) for b in range(r + 1)}
    R = {}
    for a in range(r + 1):
        for eta in cfg.signs:
            R[(a, eta)] = ev(count_R(a, eta, r, chi, cfg))
    Q = {}
    for m in range(r // w + 1):
        for nn in range(r - w * m + 1):
            l = r - w * m - nn
            for p1 in cfg.signs:
                p2 = chi * p1 * cfg.epsilon ** m if cfg.case == "S" else 1
                Q[(nn, p1, m)] = ev(count_Q(nn, p1, m, l, p2, cfg))
    return {"S": S, "R": R, "Q": Q}


@dataclass
class CountReport:
    fs: FormSpace
    brute: dict
    formula: dict
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def compare_counts(fs: FormSpace) -> CountReport:
    brute = brute_counts(fs)
    form = formula_counts(fs)
    rep = CountReport(fs, brute, form)
    for kind in ("S", "R", "Q"):
        keys = set(brute[kind]) | set(form[kind])
        for key in sorted(keys, key=repr):
            b = brute[kind].get(key, 0)
            f = form[kind].get(key, Fraction(0))
            if Fraction(b) != f:
                rep.mismatches.append((kind, key, b, f))
    return rep


# ---------------------------------------------------------------------------
# standard forms


def standard_gram(cfg: CaseConfig, F: GF, r: int, chi: int = 1) -> Matrix:
    """A nondegenerate gram matrix of type (r, chi)."""
    if cfg.case == "A":
        n = 2 * r
        G = [[0] * n for _ in range(n)]
        for i in range(r):
            G[2 * i][2 * i + 1] = 1
            G[2 * i + 1][2 * i] = F.neg(1)
        return G
    G = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    if cfg.case == "S" and chi == -1:
        if r == 0:
            raise ValueError("no form of type (0, -)")
        G[r - 1][r - 1] = next(a for a in range(1, F.p) if F.legendre(a) == -1)
    return G


def form_space(case: str, p: int, r: int, chi: int = 1, gram: Matrix | None = None) -> FormSpace:
    d = 2 if case == "uH" else 1
    F = get_field(p, d)
    cfg = CaseConfig(case, epsilon_for(p) if case == "S" else 1)
    G = gram if gram is not None else standard_gram(cfg, F, r, chi)
    return FormSpace(cfg, F, tuple(tuple(row) for row in G))


def suite_spaces(max_dim: int = 4, max_dim_a: int = 6) -> list[FormSpace]:
    """The form spaces of the finite-field suite."""
    out = []
    for p in (2, 3):
        for r in range(1, max_dim + 1):
            out.append(form_space("uH", p, r))
    for p in (3, 5):
        for r in range(1, max_dim + 1):
            for chi in (1, -1):
                out.append(form_space("S", p, r, chi))
    for p in (2, 3):
        for r in range(1, max_dim_a // 2 + 1):
            out.append(form_space("A", p, r))
    return out


def parse_gram(text: str, F: GF) -> Matrix:
    """'1,0;0,1' -> matrix.

    Over F_p entries are integers reduced mod p; over F_{p^2} an entry is the
    code a + b*p of a + b*x with 0 <= a, b < p.
    """
    rows = [r for r in text.replace(" ", "").split(";") if r]
    out = []
    for r in rows:
        vals = [int(x) for x in r.split(",")]
        if F.d == 1:
            vals = [v % F.p for v in vals]
        elif any(not 0 <= v < F.q for v in vals):
            raise ValueError(f"entries over GF({F.q}) are codes in [0, {F.q})")
        out.append(vals)
    if any(len(r) != len(out) for r in out):
        raise ValueError("gram matrix must be square")
    return out


def isometry_group_order(fs: FormSpace, budget: int = 2_000_000) -> int:
    """Count g with g G g^* = G by exhausting all square matrices."""
    F = fs.F
    n = fs.dim
    if F.q ** (n * n) > budget:
        raise BudgetExceeded("too many matrices to enumerate")
    G = [list(r) for r in fs.gram]
    count = 0
    for flat in itertools.product(F.elements(), repeat=n * n):
        g = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
        if F.matmul(F.matmul(g, G), F.conj_transpose(g, fs.conjugate)) == G:
            count += 1
    return count
