"""Exact linear algebra over the prime fields F_p and over the integers.

Matrices over F_p are numpy ``int64`` arrays reduced mod p.  Over F_2 the
rank routines switch to Python-int bitsets, which is what makes the larger
order complexes (several thousand simplices) cheap.  Integer routines work on
lists of Python ints so nothing ever overflows.

Pivoting is canonical: the first nonzero entry in column-major order.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from . import caps


# ---------------------------------------------------------------------------
# F_p, dense


def as_dense(M) -> np.ndarray:
    if sp.issparse(M):
        caps.check("MAX_DENSE_ENTRIES", caps.MAX_DENSE_ENTRIES, M.shape[0] * M.shape[1])
        return M.toarray().astype(np.int64)
    return np.asarray(M, dtype=np.int64)


def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over F_p.

    Returns the nonzero rows of the echelon form and the pivot columns.
    """
    A = as_dense(M) % p
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod_p(M, p: int) -> int:
    """Rank of ``M`` over F_p (F_2 uses bitset elimination)."""
    if p == 2:
        return gf2_rank(bitset_rows(M))
    A = as_dense(M)
    if A.size == 0:
        return 0
    return len(rref_mod_p(A, p)[1])


def nullspace_mod_p(M, p: int) -> np.ndarray:
    """Basis (as rows) of the right kernel ``{x : M x = 0}`` over F_p."""
    A = as_dense(M) % p
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref_mod_p(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(piv):
            basis[k, c] = (-R[i, f]) % p
    return basis


class Span:
    """Incrementally grown subspace of F_p^n kept in reduced echelon form."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        for c in sorted(self.rows):
            if v[c]:
                v = (v - v[c] * self.rows[c]) % self.p
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def add(self, v) -> bool:
        """Add ``v``; returns False if it was already in the span."""
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        for k, row in self.rows.items():
            if row[c]:
                self.rows[k] = (row - row[c] * v) % self.p
        self.rows[c] = v
        return True

    def add_many(self, vectors: Iterable) -> int:
        return sum(1 for v in vectors if self.add(v))


# ---------------------------------------------------------------------------
# F_2, bitsets


def bitset_rows(M) -> list[int]:
    """Rows of a 0/1 (mod 2) matrix as Python-int bitsets."""
    if sp.issparse(M):
        M = sp.csr_matrix(M)
        out = []
        for i in range(M.shape[0]):
            lo, hi = M.indptr[i], M.indptr[i + 1]
            v = 0
            for j, a in zip(M.indices[lo:hi], M.data[lo:hi]):
                if a % 2:
                    v ^= 1 << int(j)
            out.append(v)
        return out
    A = as_dense(M) % 2
    out = []
    for row in A:
        v = 0
        for j in np.flatnonzero(row):
            v |= 1 << int(j)
        out.append(v)
    return out


def gf2_rank(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            h = v.bit_length() - 1
            w = pivots.get(h)
            if w is None:
                pivots[h] = v
                break
            v ^= w
    return len(pivots)


# ---------------------------------------------------------------------------
# integers


def _int_matrix(M) -> list[list[int]]:
    if sp.issparse(M):
        M = M.toarray()
    if isinstance(M, np.ndarray):
        return [[int(x) for x in row] for row in M.tolist()]
    return [[int(x) for x in row] for row in M]


def _snf_core(M, track: bool):
    A = _int_matrix(M)
    m = len(A)
    n = len(A[0]) if m else 0
    caps.check("MAX_SNF_SIZE", caps.MAX_SNF_SIZE, max(m, n))
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    Ui = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        ra, rs = A[dst], A[src]
        for k in range(n):
            if rs[k]:
                ra[k] += q * rs[k]
        if track:
            ru, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ru[k] += q * us[k]
            for row in Ui:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    if A[t][j]:
                        clean = False
            if not clean:
                cand = None
                for i in range(t + 1, m):
                    if A[i][t] and (cand is None or abs(A[i][t]) < cand[0]):
                        cand = (abs(A[i][t]), "r", i)
                for j in range(t + 1, n):
                    if A[t][j] and (cand is None or abs(A[t][j]) < cand[0]):
                        cand = (abs(A[t][j]), "c", j)
                if cand[1] == "r":
                    swap_rows(t, cand[2])
                else:
                    swap_cols(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if track:
                U[t] = [-x for x in U[t]]
                for row in Ui:
                    row[t] = -row[t]
        t += 1
    return A, U, V, Ui


def smith_normal_form(M):
    """Smith normal form over Z.

    Returns ``(U, D, V)`` as lists of lists of Python ints with
    ``U @ M @ V == D``; U and V are unimodular and the diagonal of D is a
    divisibility chain of nonnegative integers.
    """
    D, U, V, _ = _snf_core(M, track=True)
    return U, D, V


def smith_decomposition(M):
    """Like :func:`smith_normal_form` but also returns ``U^{-1}``."""
    D, U, V, Ui = _snf_core(M, track=True)
    return U, D, V, Ui


def invariant_factors(M) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of ``M``."""
    A = _int_matrix(M)
    if not A or not A[0]:
        return []
    D, _, _, _ = _snf_core(A, track=False)
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]


def int_matmul(A, B) -> list[list[int]]:
    A = _int_matrix(A)
    B = _int_matrix(B)
    if not A:
        return []
    cols = len(B[0]) if B else 0
    out = [[0] * cols for _ in A]
    for i, row in enumerate(A):
        o = out[i]
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        o[j] += a * bk[j]
    return out


def int_det(M) -> int:
    """Exact determinant via the Bareiss fraction-free algorithm."""
    A = _int_matrix(M)
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def is_divisibility_chain(diag: Sequence[int]) -> bool:
    """Nonnegative, zeros trailing, each nonzero entry divides the next."""
    seen_zero = False
    prev = None
    for d in diag:
        if d == 0:
            seen_zero = True
            continue
        if seen_zero or d < 0:
            return False
        if prev is not None and d % prev:
            return False
        prev = d
    return True


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
