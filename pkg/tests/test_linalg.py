"""Exact linear algebra over F_p and Z, checked against sympy."""

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF, ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors as sympy_invariants
from sympy.polys.matrices import DomainMatrix

from equihom import linalg as la
from equihom.errors import SizeCapError


def small_matrices(max_side=6, lo=-6, hi=6):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def sympy_rank_mod(M, p):
    return DomainMatrix.from_Matrix(Matrix(M)).convert_to(GF(p)).rank()


def test_snf_examples():
    assert la.invariant_factors([[1, 0], [0, 1]]) == [1, 1]
    assert la.invariant_factors([[2]]) == [2]
    assert la.invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    U, D, V = la.smith_normal_form([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_snf_reconstruction(M):
    U, D, V = la.smith_normal_form(M)
    assert la.int_matmul(la.int_matmul(U, M), V) == D
    assert abs(la.int_det(U)) == 1 and abs(la.int_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert la.is_divisibility_chain(diag)
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_invariant_factors_match_sympy(M):
    ours = la.invariant_factors(M)
    theirs = [abs(int(x)) for x in sympy_invariants(Matrix(M), domain=ZZ) if x != 0]
    assert ours == theirs


@settings(max_examples=150, deadline=None)
@given(small_matrices(max_side=8, lo=0, hi=10), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_sympy(M, p):
    assert la.rank_mod_p(np.array(M), p) == sympy_rank_mod(M, p)
    assert la.rank_mod_p(sp.csr_matrix(np.array(M)), p) == sympy_rank_mod(M, p)


@settings(max_examples=100, deadline=None)
@given(small_matrices(max_side=7, lo=0, hi=6), st.sampled_from([2, 3, 5]))
def test_nullspace_mod_p(M, p):
    A = np.array(M)
    N = la.nullspace_mod_p(A, p)
    assert N.shape[0] == A.shape[1] - sympy_rank_mod(M, p)
    assert not ((A @ N.T) % p).any()
    assert la.rank_mod_p(N, p) == N.shape[0]


def test_span_is_echelon():
    S = la.Span(3, 5)
    assert S.add([1, 2, 3]) and S.add([0, 1, 1])
    assert not S.add([2, 4, 6])
    assert S.contains([1, 3, 4]) and not S.contains([0, 0, 1])
    assert len(S) == 2


def test_gf2_bitsets_agree_with_dense():
    rng = np.random.default_rng(5)
    for _ in range(30):
        A = rng.integers(0, 2, size=(rng.integers(1, 12), rng.integers(1, 70)))
        assert la.gf2_rank(la.bitset_rows(A)) == len(la.rref_mod_p(A, 2)[1])


def test_dense_cap(monkeypatch):
    monkeypatch.setattr(la.caps, "MAX_DENSE_ENTRIES", 10)
    with pytest.raises(SizeCapError):
        la.as_dense(sp.csr_matrix((5, 5)))
