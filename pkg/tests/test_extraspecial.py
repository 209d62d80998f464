"""The split extraspecial 2-groups, isotropic subspaces and decorated posets."""

import itertools
from fractions import Fraction

import pytest

from equihom import extraspecial as ex
from equihom.chains import group_homology
from equihom.errors import PreconditionError
from equihom.groups import all_subgroups, is_normal


def brute_isotropic(n, k):
    """Distinct k-dimensional spans of k-tuples on which q vanishes."""
    V = ex.QuadraticSpace(n)
    found = set()
    for vs in itertools.combinations(range(1, V.size), k):
        sp = {0}
        for v in vs:
            sp |= {w ^ v for w in sp}
        if len(sp) == 2 ** k and all(V.q(w) == 0 for w in sp):
            found.add(frozenset(sp))
    return len(found)


def test_quadratic_space():
    for n in range(4):
        V = ex.QuadraticSpace(n)
        assert ex.check_quadratic_space(V)
        for x in V.vectors():
            for y in V.vectors():
                assert V.b(x, y) == (V.q(x ^ y) - V.q(x) - V.q(y)) % 2
                assert V.cocycle(x, y) ^ V.cocycle(y, x) == V.b(x, y)


@pytest.mark.parametrize("n,counts", [(1, [2]), (2, [9, 6]), (3, [35, 105, 30])])
def test_isotropic_counts(n, counts):
    got = [ex.count_q_isotropic(n, k) for k in range(1, n + 1)]
    assert got == counts
    assert got == [brute_isotropic(n, k) for k in range(1, n + 1)]


def test_printed_formula_column():
    printed = {(n, k): ex.v_formula_as_printed(n, k) for n in (1, 2, 3) for k in range(1, n + 1)}
    # the printed expression carries an extra 2^{k(k-1)/2}
    for (n, k), v in printed.items():
        assert Fraction(v) == ex.count_q_isotropic(n, k) * 2 ** (k * (k - 1) // 2)
    assert [row[2] for row in ex.isotropic_counts(3)] == [35, 210, 240]


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_group_structure(n):
    E = ex.build_extraspecial(n)
    assert E.group.order == 2 ** (2 * n + 1)
    assert ex.check_extraspecial(E)
    assert is_normal(E.group, E.center)


def test_order_spectra():
    assert ex.build_extraspecial(1).order_spectrum() == {1: 1, 2: 5, 4: 2}
    # D8 o D8: the 2^4 vectors split as 10 with q = 0 and 6 with q = 1
    assert ex.build_extraspecial(2).order_spectrum() == {1: 1, 2: 19, 4: 12}


@pytest.mark.parametrize("n", [1, 2])
def test_decorations_are_complements_of_the_center(n):
    E = ex.build_extraspecial(n)
    P = ex.decorated_poset(n)
    brute = [H for H in all_subgroups(E.group) if H.order > 1 and not H.mask & 0b10]
    assert P.n == len(brute)
    assert {d.mask for d in P.labels} == {H.mask for H in brute}


def test_decorated_poset_sizes():
    assert [ex.decorated_poset(n).n for n in (1, 2, 3)] == [4, 42, 730]
    for n in (1, 2):
        assert ex.lifts_conjugate(ex.decorated_poset(n))


@pytest.mark.parametrize("n,h", [(1, 3), (2, 31), (3, 1149)])
def test_decorated_homology(n, h):
    R = ex.decorated_homology(n, with_module=n < 3)
    assert R.concentrated
    assert R.dims[n - 1] == h == ex.dimension_recursion(n)


def test_recursion_values():
    assert [ex.dimension_recursion(n) for n in range(5)] == [1, 3, 31, 1149, 159211]


def test_h1_module():
    M = ex.decorated_homology(1).module
    E = ex.build_extraspecial(1)
    assert M.dim == 3
    assert M.coinvariants_dim() == 1
    assert group_homology(E.group, M, 0)[0] == 1


@pytest.mark.parametrize("n,rank,counts", [(2, 4, [15, 18]), (3, 64, [170, 735, 630])])
def test_tits_building(n, rank, counts):
    R = ex.tits_building_homology(n)
    assert R.concentrated and R.counts == counts
    assert ex.tits_building_rank(n) == rank == 2 ** (n * (n - 1))


@pytest.mark.parametrize("n", [1, 2])
def test_weyl_orders(n):
    for k, got, expected in ex.weyl_order_check(n):
        assert got == expected


def test_final_assembly_n1():
    rhs = ex.final_theorem_rhs(1, 3).as_list(0, 3)
    lhs = ex.final_theorem_lhs_oracle(1, 3, 3).as_list(0, 3)
    assert lhs == rhs == [1, 2, 3, 4]


def test_join_oracle_refuses_outside_stable_range():
    with pytest.raises(PreconditionError):
        ex.final_theorem_lhs_oracle(1, 2, 3)
