"""Small finite fields F_p and F_{p^2} by lookup tables, with dense linear algebra.

Elements are integers ``a + b*p`` standing for ``a + b*x`` where ``x`` is a root
of the defining quadratic.  Tables make every operation a list lookup, which
keeps brute-force enumeration over F_9 or F_25 cheap enough.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

Matrix = list[list[int]]


class GF:
    def __init__(self, p: int, d: int = 1, modulus: tuple[int, int] | None = None):
        """``modulus=(m1, m0)`` means x^2 = m1*x + m0; defaults to x^2 = c for the
        least non-residue c (odd p) and x^2 = x + 1 for p = 2."""
        if d not in (1, 2):
            raise ValueError("only prime fields and quadratic extensions are supported")
        self.p, self.d = p, d
        self.q = p ** d
        if d == 2 and modulus is None:
            if p == 2:
                modulus = (1, 1)
            else:
                c = next(c for c in range(2, p) if pow(c, (p - 1) // 2, p) == p - 1)
                modulus = (0, c)
        self.modulus = modulus
        q = self.q
        self._add = [[self._add_raw(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._mul_raw(a, b) for b in range(q)] for a in range(q)]
        self._neg = [0] * q
        for a in range(q):
            for b in range(q):
                if self._add[a][b] == 0:
                    self._neg[a] = b
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
        self._conj = [self._pow_raw(a, p) if d == 2 else a for a in range(q)]

    # raw arithmetic used to build tables
    def _split(self, a):
        return a % self.p, a // self.p

    def _join(self, a0, a1):
        return a0 % self.p + (a1 % self.p) * self.p

    def _add_raw(self, a, b):
        a0, a1 = self._split(a)
        b0, b1 = self._split(b)
        return self._join(a0 + b0, a1 + b1)

    def _mul_raw(self, a, b):
        a0, a1 = self._split(a)
        b0, b1 = self._split(b)
        if self.d == 1:
            return (a0 * b0) % self.p
        m1, m0 = self.modulus
        c2 = a1 * b1
        return self._join(a0 * b0 + c2 * m0, a0 * b1 + a1 * b0 + c2 * m1)

    def _pow_raw(self, a, n):
        out = 1
        for _ in range(n):
            out = self._mul_raw(out, a)
        return out

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.d, self.modulus) == (other.p, other.d, other.modulus)

    def __hash__(self):
        return hash((self.p, self.d, self.modulus))

    # public scalar API
    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def conj(self, a):
        return self._conj[a]

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def is_prime_field_element(self, a) -> bool:
        return a < self.p

    def legendre(self, a: int) -> int:
        """Quadratic character of a nonzero prime-field element (odd p)."""
        if a == 0:
            raise ValueError("legendre of 0")
        if not self.is_prime_field_element(a):
            raise ValueError("legendre symbol is taken in the prime field")
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    # linear algebra ------------------------------------------------------
    def matmul(self, A: Matrix, B: Matrix) -> Matrix:
        add, mul = self._add, self._mul
        cols = list(zip(*B)) if B else []
        out = []
        for row in A:
            r = []
            for col in cols:
                s = 0
                for a, b in zip(row, col):
                    if a and b:
                        s = add[s][mul[a][b]]
                r.append(s)
            out.append(r)
        return out

    def conj_transpose(self, A: Matrix, conj: bool) -> Matrix:
        if not A:
            return []
        cj = self._conj if conj else None
        return [[(cj[x] if cj else x) for x in col] for col in zip(*A)]

    def rref(self, A: Matrix) -> tuple[Matrix, list[int]]:
        M = [list(r) for r in A]
        pivots = []
        row = 0
        ncols = len(M[0]) if M else 0
        for col in range(ncols):
            piv = next((i for i in range(row, len(M)) if M[i][col]), None)
            if piv is None:
                continue
            M[row], M[piv] = M[piv], M[row]
            iv = self._inv[M[row][col]]
            M[row] = [self._mul[iv][x] for x in M[row]]
            for i in range(len(M)):
                if i != row and M[i][col]:
                    f = M[i][col]
                    M[i] = [self.sub(x, self._mul[f][y]) for x, y in zip(M[i], M[row])]
            pivots.append(col)
            row += 1
            if row == len(M):
                break
        return M[:row], pivots

    def rank(self, A: Matrix) -> int:
        if not A:
            return 0
        return len(self.rref(A)[1])

    def nullspace(self, A: Matrix, ncols: int) -> Matrix:
        """Basis of {v : A v = 0} as rows."""
        if not A:
            return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
        R, piv = self.rref(A)
        free = [c for c in range(ncols) if c not in piv]
        out = []
        for f in free:
            v = [0] * ncols
            v[f] = 1
            for row, pc in zip(R, piv):
                v[pc] = self.neg(row[f])
            out.append(v)
        return out

    def inverse(self, A: Matrix) -> Matrix:
        n = len(A)
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A)]
        R, piv = self.rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return [r[n:] for r in R]

    def intersect_rows(self, A: Matrix, B: Matrix, n: int) -> Matrix:
        """Basis of rowspace(A) cap rowspace(B)."""
        if not A or not B:
            return []
        # v = x A = y B  <=>  [x, -y] [A; B] = 0
        stacked_t = self.conj_transpose(A + B, False)
        sols = self.nullspace(stacked_t, len(A) + len(B))
        vecs = []
        for s in sols:
            x = s[: len(A)]
            v = [0] * n
            for coef, row in zip(x, A):
                if coef:
                    v = [self.add(a, self._mul[coef][b]) for a, b in zip(v, row)]
            vecs.append(v)
        if not vecs:
            return []
        return self.rref(vecs)[0]


@lru_cache(maxsize=None)
def field(p: int, d: int = 1) -> GF:
    return GF(p, d)


def rref_subspaces(F: GF, n: int, k: int):
    """Every k-dimensional subspace of F^n, once, as its RREF basis (rows)."""
    from itertools import combinations, product

    if k == 0:
        yield []
        return
    for piv in combinations(range(n), k):
        free = [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, n) if j not in piv]
        for vals in product(F.elements(), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield rows


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def diagonalize_symmetric(F: GF, G: Matrix) -> list[int]:
    """Diagonal entries of a congruent diagonal form (odd characteristic); zeros for the radical."""
    M = [list(r) for r in G]
    n = len(M)
    diag = []
    active = list(range(n))
    while active:
        i0 = next((i for i in active if M[i][i]), None)
        if i0 is None:
            pair = next(((i, j) for i in active for j in active if i != j and M[i][j]), None)
            if pair is None:
                diag.extend([0] * len(active))
                break
            i, j = pair
            # e_i += e_j
            for c in range(n):
                M[i][c] = F.add(M[i][c], M[j][c])
            for rr in range(n):
                M[rr][i] = F.add(M[rr][i], M[rr][j])
            i0 = i
        piv = M[i0][i0]
        iv = F.inv(piv)
        for j in active:
            if j != i0 and M[j][i0]:
                f = F.mul(M[j][i0], iv)
                for c in range(n):
                    M[j][c] = F.sub(M[j][c], F.mul(f, M[i0][c]))
                for rr in range(n):
                    M[rr][j] = F.sub(M[rr][j], F.mul(f, M[rr][i0]))
        diag.append(piv)
        active.remove(i0)
    return diag
