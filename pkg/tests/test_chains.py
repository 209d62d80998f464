"""Chain complexes, homology over F_p and Z, resolutions and Borel homology."""

import numpy as np
import pytest

from equihom import bredon as br
from equihom.chains import (ChainComplex, GradedDims, GroupModule, bar_homology,
                            borel_hyperhomology, check_universal_coefficients, coinvariants_free,
                            format_matrix, group_homology, homology_fp, homology_z,
                            minimal_resolution, parse_matrix, random_integral_complex)
from equihom.errors import ConsistencyError, ParseError
from equihom.groups import builtin
from equihom.posets import antichain, order_complex, reduced_chain_complex


def circle_one_cell(p=2):
    return ChainComplex({0: 1, 1: 1}, {1: [[0]]}, p=p)


def theta(p=2):
    return ChainComplex({0: 2, 1: 3}, {1: [[-1, -1, -1], [1, 1, 1]]}, p=p)


def triangle_boundary(p=2):
    return ChainComplex({0: 3, 1: 3}, {1: [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]}, p=p)


def test_homology_examples():
    assert homology_fp(circle_one_cell(), 2, range(2)).as_list(0, 1) == [1, 1]
    assert homology_fp(theta(), 2, range(2)).as_list(0, 1) == [1, 2]
    assert homology_fp(triangle_boundary(3), 3, range(3)).as_list(0, 2) == [1, 1, 0]


def test_integral_torsion():
    # RP^2-like: Z --2--> Z
    C = ChainComplex({1: 1, 2: 1}, {2: [[2]]}, p=0)
    H = homology_z(C, range(3))
    assert H[1] == 0 and H.torsion[1] == (2,) and H[2] == 0
    assert homology_fp(C.reduce_mod(2), 2, range(3)).as_list(0, 2) == [0, 1, 1]
    assert homology_fp(C.reduce_mod(3), 3, range(3)).as_list(0, 2) == [0, 0, 0]


def test_dd_is_checked():
    with pytest.raises(ConsistencyError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[1]]}, p=0)


def test_universal_coefficients_random():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        C = random_integral_complex(rng)
        for p in (2, 3):
            assert check_universal_coefficients(C, p)


def test_euler_characteristic_conserved():
    rng = np.random.default_rng(7)
    for _ in range(20):
        C = random_integral_complex(rng)
        Cp = C.reduce_mod(2)
        ks = range(min(C.degrees) - 1, max(C.degrees) + 2)
        H = homology_fp(Cp, 2, ks)
        assert sum((-1) ** k * H[k] for k in ks) == C.euler_characteristic()


@pytest.mark.parametrize("spec,ranks", [(("cyclic", 2), [1, 1, 1, 1, 1]),
                                        (("elementary", 2, 2), [1, 2, 3, 4, 5]),
                                        (("dihedral", 8), [1, 2, 3, 4, 5])],
                         ids=lambda s: str(s))
def test_minimal_resolution_ranks(spec, ranks):
    R = minimal_resolution(builtin(*spec), 2, 4)
    assert R.ranks == ranks
    assert R.check_exact()


@pytest.mark.parametrize("spec,p", [(("cyclic", 2), 2), (("cyclic", 4), 2), (("elementary", 2, 2), 2),
                                    (("dihedral", 8), 2), (("quaternion", 8), 2), (("cyclic", 3), 3),
                                    (("symmetric", 3), 2), (("symmetric", 3), 3), (("cyclic", 6), 3)],
                         ids=lambda s: str(s))
def test_resolution_matches_bar_oracle(spec, p):
    G = builtin(*spec)
    M = GroupModule.trivial(G, p)
    assert group_homology(G, M, 3).as_list(0, 3) == bar_homology(G, M, 3).as_list(0, 3)


def test_group_homology_examples():
    Z2 = builtin("cyclic", 2)
    assert group_homology(Z2, GroupModule.trivial(Z2, 2), 5).as_list(0, 5) == [1] * 6
    Z3 = builtin("cyclic", 3)
    assert group_homology(Z3, GroupModule.trivial(Z3, 2), 4).as_list(0, 4) == [1, 0, 0, 0, 0]


def test_nontrivial_module_against_bar():
    G = builtin("dihedral", 8)
    M = GroupModule.regular(G, 2)
    assert group_homology(G, M, 3).as_list(0, 3) == [1, 0, 0, 0]
    assert bar_homology(G, M, 3).as_list(0, 3) == [1, 0, 0, 0]


def kunneth(C, W, p, top):
    """Borel homology for a trivial action: H(C) convolved with H(W)."""
    HC = homology_fp(C, p, range(min(C.degrees), top + 1))
    HW = bar_homology(W, GroupModule.trivial(W, p), top)
    return [sum(HC[t] * HW[d - t] for t in range(min(C.degrees), d + 1) if d - t >= 0)
            for d in range(0, top + 1)]


def trivial_modules(W, C, p):
    return {k: GroupModule.trivial(W, p, C.dim(k)) for k in C.degrees}


def test_borel_trivial_group_is_homology():
    C = theta()
    E = builtin("trivial")
    assert borel_hyperhomology(E, C, trivial_modules(E, C, 2), 3).as_list(0, 3) == [1, 2, 0, 0]


def test_borel_circle_with_trivial_z2():
    C = circle_one_cell()
    W = builtin("cyclic", 2)
    got = borel_hyperhomology(W, C, trivial_modules(W, C, 2), 4).as_list(0, 4)
    assert got == kunneth(C, W, 2, 4) == [1, 2, 2, 2, 2]


def test_borel_suspended_antichain():
    K = order_complex(antichain(3))
    C = reduced_chain_complex(K, 2).shifted(1)
    W = builtin("elementary", 2, 2)
    got = borel_hyperhomology(W, C, trivial_modules(W, C, 2), 4).as_list(0, 4)
    assert got == kunneth(C, W, 2, 4) == [0, 2, 4, 6, 8]


def test_coinvariants_swap():
    W = builtin("cyclic", 2)
    C = ChainComplex({0: 2}, {}, p=2)
    acts = {0: br.SignedAction(np.array([[0, 1], [1, 0]]), np.ones((2, 2), dtype=np.int64))}
    Q = coinvariants_free(C, W, acts, 2)
    assert Q.dim(0) == 1


def test_free_action_borel_equals_quotient():
    G = builtin("cyclic", 2)
    X = br.join_power_sphere(G, br.sign_sphere(G, G.trivial), 2)
    C = X.chain_complex(2)
    acts = {k: X.simplex_action(k) for k in X.simplices}
    Q = coinvariants_free(C, G, acts, 2)
    mods = {k: a.module(G, 2) for k, a in acts.items()}
    quotient = homology_fp(Q, 2, range(0, 4)).as_list(0, 3)
    assert quotient == [1, 1, 0, 0]
    assert borel_hyperhomology(G, C, mods, 3).as_list(0, 3) == quotient


def test_d8_circle_strata_coinvariants():
    X = br.dihedral_gamma_circle()
    G = X.group
    free = [S for S in br.strata(X) if S.subgroup.order == 1]
    assert len(free) == 1
    # based quotient: the circle with its vertices collapsed to the basepoint
    assert homology_fp(free[0].coinvariants(2), 2, range(3)).as_list(0, 2) == [0, 1, 0]
    mods = {k: X.simplex_action(k).module(G, 2) for k in X.simplices}
    assert borel_hyperhomology(G, X.chain_complex(2), mods, 3).as_list(0, 3) == [1, 2, 2, 2]


def test_graded_dims_tsv():
    H = GradedDims({0: 1, 1: 0, 2: 3}, {1: (2,)}, ring=0)
    assert H.to_tsv() == "0\t1\n1\t0\t2\n2\t3\n"
    assert H.shifted(1)[3] == 3


def test_matrix_round_trip():
    M = np.array([[1, 0, 2], [0, 3, 0]])
    N, ring = parse_matrix(format_matrix(M, "z"))
    assert ring == "z" and (N.toarray() == M).all()
    with pytest.raises(ParseError):
        parse_matrix("matrix 2 2 q\n")
