"""Lattices over truncated p-adic rings: Jordan splitting and sublattice enumeration.

The base ring is Z/p^N, or for case uH the Galois ring Z/p^N[x]/(x^2 - c) with
c a quadratic non-residue mod p.  Since x^2 = c has exactly the two roots +-x,
the nontrivial automorphism is a + b x -> a - b x, which is also the lift of
Frobenius.  Elements are pairs (a, b) of integers in [0, p^N).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..coeff import CaseConfig, scalar_eval_q
from ..hecke import t_star_direct
from ..typmon import OrbitType
from .fields import GF, field as get_field, gaussian_binomial, rref_subspaces
from .finitefield import BudgetExceeded, classify_form, epsilon_for

Elem = tuple[int, int]


class PrecisionLoss(ArithmeticError):
    pass


class Mismatch(AssertionError):
    pass


class TruncatedRing:
    def __init__(self, p: int, N: int = 8, d: int = 1):
        self.p, self.N, self.d = p, N, d
        self.mod = p ** N
        self.F = get_field(p, d)
        if d == 2:
            if p == 2:
                raise ValueError("the Galois ring model here needs odd p")
            m1, m0 = self.F.modulus
            assert m1 == 0
            self.c = m0
        else:
            self.c = 0

    def __repr__(self):
        return f"TruncatedRing(p={self.p}, N={self.N}, d={self.d})"

    def __eq__(self, other):
        return isinstance(other, TruncatedRing) and (self.p, self.N, self.d) == (other.p, other.N, other.d)

    def __hash__(self):
        return hash((self.p, self.N, self.d))

    zero: Elem = (0, 0)
    one: Elem = (1, 0)

    def elem(self, a: int, b: int = 0) -> Elem:
        return a % self.mod, b % self.mod

    def gen(self) -> Elem:
        return (0, 1)

    def add(self, x: Elem, y: Elem) -> Elem:
        return (x[0] + y[0]) % self.mod, (x[1] + y[1]) % self.mod

    def sub(self, x: Elem, y: Elem) -> Elem:
        return (x[0] - y[0]) % self.mod, (x[1] - y[1]) % self.mod

    def neg(self, x: Elem) -> Elem:
        return (-x[0]) % self.mod, (-x[1]) % self.mod

    def mul(self, x: Elem, y: Elem) -> Elem:
        a, b = x
        c, d = y
        return (a * c + self.c * b * d) % self.mod, (a * d + b * c) % self.mod

    def conj(self, x: Elem) -> Elem:
        return x[0], (-x[1]) % self.mod

    def _v_int(self, a: int) -> int:
        if a == 0:
            return self.N
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def val(self, x: Elem) -> int:
        """Valuation, capped at N (the ring cannot see beyond p^N)."""
        return min(self._v_int(x[0]), self._v_int(x[1]))

    def shift_down(self, x: Elem, v: int) -> Elem:
        """x / p^v for val(x) >= v (the result is determined mod p^(N-v))."""
        pv = self.p ** v
        if x[0] % pv or x[1] % pv:
            raise ArithmeticError("not divisible")
        return x[0] // pv, x[1] // pv

    def unit_inv(self, x: Elem) -> Elem:
        a, b = x
        nrm = (a * a - self.c * b * b) % self.mod
        if nrm % self.p == 0:
            raise ZeroDivisionError("not a unit")
        ni = pow(nrm, -1, self.mod)
        return (a * ni) % self.mod, (-b * ni) % self.mod

    def divide(self, x: Elem, y: Elem) -> Elem:
        """x / y when val(x) >= val(y); exact modulo p^(N - val(y))."""
        v = self.val(y)
        if self.val(x) < v:
            raise ArithmeticError("quotient is not integral")
        return self.mul(self.shift_down(x, v), self.unit_inv(self.shift_down(y, v)))

    def reduce(self, x: Elem) -> int:
        """Residue in the table field GF(p^d)."""
        return x[0] % self.p + (x[1] % self.p) * self.p if self.d == 2 else x[0] % self.p

    def lift(self, a: int) -> Elem:
        return (a % self.p, a // self.p) if self.d == 2 else (a, 0)

    def legendre_unit(self, x: Elem) -> int:
        if x[1] % self.p:
            raise ValueError("sign is taken of a rational unit")
        return self.F.legendre(x[0] % self.p)


Mat = list[list[Elem]]


@dataclass
class GramLattice:
    cfg: CaseConfig
    ring: TruncatedRing
    gram: Mat

    def __post_init__(self):
        R, G, n = self.ring, self.gram, len(self.gram)
        if any(len(row) != n for row in G):
            raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if self.cfg.case == "uH":
                    ok = G[i][j] == R.conj(G[j][i])
                elif self.cfg.case == "S":
                    ok = G[i][j] == G[j][i]
                else:
                    ok = G[i][j] == R.neg(G[j][i])
                if not ok:
                    raise ValueError(f"gram matrix does not have the {self.cfg.case} symmetry")

    @property
    def n(self) -> int:
        return len(self.gram)

    @property
    def conjugate(self) -> bool:
        return self.cfg.case == "uH"


def matmul(R: TruncatedRing, A: Mat, B: Mat) -> Mat:
    cols = list(zip(*B))
    out = []
    for row in A:
        r = []
        for col in cols:
            s = R.zero
            for a, b in zip(row, col):
                if a != R.zero and b != R.zero:
                    s = R.add(s, R.mul(a, b))
            r.append(s)
        out.append(r)
    return out


def star(R: TruncatedRing, A: Mat, conj: bool) -> Mat:
    return [[(R.conj(x) if conj else x) for x in col] for col in zip(*A)]


def congruent(gl: GramLattice, B: Mat) -> Mat:
    """B G B^*: the gram matrix of the lattice spanned by the rows of B."""
    R = gl.ring
    return matmul(R, matmul(R, B, gl.gram), star(R, B, gl.conjugate))


# ---------------------------------------------------------------------------
# Jordan splitting


@dataclass
class JordanData:
    orbit: OrbitType
    basis: Mat  # rows; basis @ G @ basis^* is block diagonal
    blocks: list  # (valuation, row indices into basis, reduced unit block over GF)


def _row_op(R, M, P, i, j, c, conj):
    """Basis change e_i += c e_j applied to the gram matrix M and the basis P."""
    n = len(M)
    M[i] = [R.add(a, R.mul(c, b)) for a, b in zip(M[i], M[j])]
    cc = R.conj(c) if conj else c
    for r in range(n):
        M[r][i] = R.add(M[r][i], R.mul(M[r][j], cc))
    P[i] = [R.add(a, R.mul(c, b)) for a, b in zip(P[i], P[j])]


def _swap(M, P, i, j):
    M[i], M[j] = M[j], M[i]
    for row in M:
        row[i], row[j] = row[j], row[i]
    P[i], P[j] = P[j], P[i]


def jordan_decompose(gl: GramLattice, guard: int = 3) -> JordanData:
    """Split into p^i-modular pieces by unimodular congruence."""
    R = gl.ring
    cfg = gl.cfg
    conj = gl.conjugate
    n = gl.n
    M = [list(r) for r in gl.gram]
    P = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    limit = R.N - guard
    done = 0
    blocks = []
    while done < n:
        act = range(done, n)
        v = min(R.val(M[i][j]) for i in act for j in act)
        if v > limit:
            raise PrecisionLoss(f"remaining block has valuation > {limit} at precision {R.N}")
        if cfg.case == "A":
            i, j = next((i, j) for i in act for j in act if R.val(M[i][j]) == v)
            _swap(M, P, done, i)
            if j == done:
                j = i
            _swap(M, P, done + 1, j)
            a01, a10 = M[done][done + 1], M[done + 1][done]
            for k in range(done + 2, n):
                beta = R.divide(M[k][done], a10)
                alpha = R.divide(M[k][done + 1], a01)
                if beta != R.zero:
                    _row_op(R, M, P, k, done + 1, R.neg(beta), False)
                if alpha != R.zero:
                    _row_op(R, M, P, k, done, R.neg(alpha), False)
            unit = R.shift_down(M[done][done + 1], v)
            red = [[0, R.reduce(unit)], [R.F.neg(R.reduce(unit)), 0]]
            blocks.append((v, [done, done + 1], red))
            done += 2
            continue
        diag = next((i for i in act if R.val(M[i][i]) == v), None)
        if diag is None:
            i, j = next((i, j) for i in act for j in act if i != j and R.val(M[i][j]) == v)
            cands = [R.one] + ([R.gen()] if R.d == 2 else [])
            for c in cands:
                nd = R.add(R.add(M[i][i], R.mul(c, M[j][i])), R.add(R.mul(M[i][j], R.conj(c) if conj else c), R.mul(R.mul(c, R.conj(c) if conj else c), M[j][j])))
                if R.val(nd) == v:
                    _row_op(R, M, P, i, j, c, conj)
                    break
            else:
                raise ArithmeticError("could not create a diagonal pivot")
            diag = i
        _swap(M, P, done, diag)
        piv = M[done][done]
        for k in range(done + 1, n):
            if M[k][done] != R.zero:
                f = R.divide(M[k][done], piv)
                _row_op(R, M, P, k, done, R.neg(f), conj)
        unit = R.shift_down(piv, v)
        blocks.append((v, [done], [[R.reduce(unit)]]))
        done += 1
    e0: dict[int, int] = {}
    chi0: dict[int, int] = {}
    for v, idx, red in blocks:
        e0[v] = e0.get(v, 0) + 1
        if cfg.case == "S":
            chi0[v] = chi0.get(v, 1) * R.F.legendre(red[0][0])
    return JordanData(OrbitType(e0, chi0), P, blocks)


def jordan_split(gl: GramLattice) -> OrbitType:
    return jordan_decompose(gl).orbit


# ---------------------------------------------------------------------------
# gram matrices from orbit types


def gram_of_orbit(o: OrbitType, cfg: CaseConfig, ring: TruncatedRing) -> Mat:
    R = ring
    p = R.p
    entries: list = []
    for i, n, c in o.data:
        for t in range(n):
            if cfg.case == "A":
                entries.append(("A", p ** i))
            else:
                u = 1
                if cfg.case == "S" and c == -1 and t == n - 1:
                    u = next(a for a in range(2, p) if R.F.legendre(a) == -1)
                entries.append(("D", u * p ** i))
    dim = sum(2 if k == "A" else 1 for k, _ in entries)
    G = [[R.zero] * dim for _ in range(dim)]
    pos = 0
    for kind, val in entries:
        if kind == "A":
            G[pos][pos + 1] = R.elem(val)
            G[pos + 1][pos] = R.elem(-val)
            pos += 2
        else:
            G[pos][pos] = R.elem(val)
            pos += 1
    return G


def lattice_of_orbit(o: OrbitType, cfg: CaseConfig, p: int, N: int = 8) -> GramLattice:
    R = TruncatedRing(p, N, 2 if cfg.case == "uH" else 1)
    return GramLattice(cfg, R, gram_of_orbit(o, cfg, R))


def case_config_for(case: str, p: int) -> CaseConfig:
    return CaseConfig(case, epsilon_for(p) if case == "S" else 1)


# ---------------------------------------------------------------------------
# sublattices pi*Lam <= L <= Lam


def sublattice_basis(R: TruncatedRing, U: list[list[int]], n: int) -> Mat:
    """Rows spanning L = lift(U) + p Lam, one row per coordinate."""
    _, piv = R.F.rref(U) if U else ([], [])
    rows = [[R.lift(a) for a in r] for r in U]
    for j in range(n):
        if j not in piv:
            rows.append([R.elem(R.p) if k == j else R.zero for k in range(n)])
    return rows


def codim_subspaces(R: TruncatedRing, n: int, k: int):
    yield from rref_subspaces(R.F, n, n - k)


def enumerate_sublattices(gl: GramLattice, k: int, budget: int = 200_000) -> Counter:
    n = gl.n
    R = gl.ring
    if not 0 <= k <= n:
        return Counter()
    if gaussian_binomial(n, k, R.F.q) > budget:
        raise BudgetExceeded("too many sublattices")
    hist: Counter = Counter()
    for U in codim_subspaces(R, n, k):
        B = sublattice_basis(R, U, n)
        hist[jordan_split(GramLattice(gl.cfg, R, congruent(gl, B)))] += 1
    return hist


# ---------------------------------------------------------------------------
# the subspace data predicting typ(L)


def _restricted_gram_F(F: GF, rows, G, conj):
    if not rows:
        return []
    return F.matmul(F.matmul(rows, G), F.conj_transpose(rows, conj))


def _orth_complement(F: GF, rows, G, conj, n):
    """{v : <v, w> = 0 for all w in rows} in the nondegenerate space (F^n, G)."""
    if not rows:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    # <v, w> = v G w^*; conditions (G w^*)^T v^T = 0
    cols = F.matmul(G, F.conj_transpose(rows, conj))  # n x k
    return F.nullspace(F.conj_transpose(cols, False), n)


def predicted_type(gl: GramLattice, jd: JordanData, U: list[list[int]]) -> tuple[OrbitType, dict]:
    """typ(L) predicted from N_i = proj_i(L cap V^{>= i}) and the derived (n, m, l, psi1, psi2)."""
    cfg = gl.cfg
    R = gl.ring
    F = R.F
    n = gl.n
    conj = gl.conjugate
    g = cfg.gamma
    Pbar = [[R.reduce(x) for x in row] for row in jd.basis]
    Pinv = F.inverse(Pbar)
    Unew = F.matmul(U, Pinv) if U else []
    levels = sorted({v for v, _, _ in jd.blocks})
    idx_of = {v: [i for vv, idx, _ in jd.blocks if vv == v for i in idx] for v in levels}
    red_of = {}
    for v in levels:
        idx = idx_of[v]
        G = [[0] * len(idx) for _ in idx]
        off = 0
        for vv, bidx, red in jd.blocks:
            if vv != v:
                continue
            for a in range(len(bidx)):
                for b in range(len(bidx)):
                    G[off + a][off + b] = red[a][b]
            off += len(bidx)
        red_of[v] = G
    data = {}
    for v in levels:
        lower = [i for w in levels if w < v for i in idx_of[w]]
        # U cap V^{>= v}: vectors of U vanishing on lower coordinates
        if Unew:
            if lower:
                cons = [[row[i] for i in lower] for row in Unew]
                sol = F.nullspace(F.conj_transpose(cons, False), len(Unew))
                vecs = F.matmul(sol, Unew) if sol else []
            else:
                vecs = Unew
        else:
            vecs = []
        proj = [[row[i] for i in idx_of[v]] for row in vecs]
        N_i = F.rref(proj)[0] if proj and any(any(r) for r in proj) else []
        G = red_of[v]
        dimv = len(idx_of[v])
        rad_N, nn, psi1 = classify_form(cfg, F, _restricted_gram_F(F, N_i, G, conj))
        perp = _orth_complement(F, N_i, G, conj, dimv)
        rad_P, ll, psi2 = classify_form(cfg, F, _restricted_gram_F(F, perp, G, conj))
        if rad_N != rad_P:
            raise Mismatch("radicals of N and its orthogonal differ")
        m = rad_N
        data[v] = (nn, psi1, m, ll, psi2)
    f0: dict[int, int] = {}
    psi0: dict[int, int] = {}
    w = 2 // g
    for v, (nn, p1, m, ll, p2) in data.items():
        eps_m = cfg.epsilon ** m if cfg.case == "S" else 1
        for pos, mult, sg in ((v, nn, p1), (v + 1, w * m, eps_m), (v + 2, ll, p2)):
            f0[pos] = f0.get(pos, 0) + mult
            psi0[pos] = psi0.get(pos, 1) * sg
    orbit = OrbitType(f0, {i: (s if f0.get(i) else 1) for i, s in psi0.items()})
    return orbit, data


@dataclass
class LemmaReport:
    gl: GramLattice
    orbit: OrbitType
    checked: int = 0
    mismatches: list = field(default_factory=list)
    histograms: dict = field(default_factory=dict)  # k -> Counter
    count_mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.count_mismatches


def specialise(comb, cfg: CaseConfig, p: int) -> dict:
    return {o: scalar_eval_q(c, p, cfg.case) for o, c in comb.items()}


def verify_main_lemma(gl: GramLattice, ks=None) -> LemmaReport:
    """Compare typ(L) with its prediction for every L, and histograms with the lattice count."""
    jd = jordan_decompose(gl)
    rep = LemmaReport(gl, jd.orbit)
    n = gl.n
    R = gl.ring
    ks = range(n + 1) if ks is None else ks
    for k in ks:
        hist: Counter = Counter()
        for U in codim_subspaces(R, n, k):
            B = sublattice_basis(R, U, n)
            actual = jordan_split(GramLattice(gl.cfg, R, congruent(gl, B)))
            pred, _ = predicted_type(gl, jd, U)
            rep.checked += 1
            hist[actual] += 1
            if pred != actual:
                rep.mismatches.append((k, U, actual, pred))
        rep.histograms[k] = hist
        expected = specialise(t_star_direct(jd.orbit, k, gl.cfg), gl.cfg, R.p)
        got = {o: Fraction(c) for o, c in hist.items()}
        if {o: c for o, c in expected.items() if c} != got:
            rep.count_mismatches.append((k, got, expected))
    return rep


def parse_padic_gram(text: str, R: TruncatedRing) -> Mat:
    """'1,0;0,3' with integer entries, or 'a+bx' entries over the Galois ring."""
    out = []
    for row in [r for r in text.replace(" ", "").split(";") if r]:
        vals = []
        for tok in row.split(","):
            if "x" in tok:
                body = tok.replace("x", "")
                if "+" in body[1:] or "-" in body[1:]:
                    cut = max(body.rfind("+"), body.rfind("-"))
                    a, b = body[:cut], body[cut:]
                else:
                    a, b = "0", body
                b = b if b not in ("", "+", "-") else b + "1"
                vals.append(R.elem(int(a or 0), int(b)))
            else:
                vals.append(R.elem(int(tok)))
        out.append(vals)
    if any(len(r) != len(out) for r in out):
        raise ValueError("gram matrix must be square")
    return out
