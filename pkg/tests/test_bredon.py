"""Bredon homology: direct versus collapse routes, E^1 tables, and Phi."""

import numpy as np
import pytest

from equihom import bredon as br
from equihom.chains import homology_fp, homology_z
from equihom.errors import DomainError, PreconditionError
from equihom.groups import (all_subgroups, builtin, family_from_maximal, frattini_subgroup,
                            proper_family, quotient)
from equihom.rings import poincare_mod_p
from equihom.verify import collapse_corpus, fixture_complexes

Z2 = builtin("cyclic", 2)


def dims(H, top):
    return H.as_list(0, top)


def test_point_and_orbit():
    D = builtin("dihedral", 8)
    assert dims(br.bredon_homology_direct(br.point(D), 2, 2), 2) == [1, 0, 0]
    assert dims(br.bredon_homology_direct(br.point(D), 0, 2), 2) == [1, 0, 0]
    H = br.bredon_homology_direct(br.orbit(D), "z", 1)
    assert dims(H, 1) == [1, 0] and not H.torsion
    assert dims(br.bredon_homology_collapse(br.point(D), 2, 3), 3) == [1, 0, 0, 0]


def test_s_alpha_asymmetry():
    X = br.s_alpha()
    assert X.counts() == [4, 4]
    assert dims(br.bredon_homology_direct(X, 2), 1) == [2, 1]
    assert dims(br.bredon_homology_collapse(X, 2), 1) == [2, 1]
    assert dims(br.bredon_cohomology(X, 2), 1) == [1, 0]


def test_s_alpha_integral():
    # the edge orbit G/e maps to both fixed points G/G by multiplication by 2
    H = br.bredon_homology_direct(br.s_alpha(), 0)
    assert H[0] == 1 and H.torsion.get(0) == (2,) and H[1] == 0


def test_cohomology_of_orbit_and_point():
    D = builtin("dihedral", 8)
    assert dims(br.bredon_cohomology(br.orbit(D), 0, 0), 0) == [1]
    assert dims(br.bredon_cohomology(br.point(D), 3, 0), 0) == [1]


def test_fixed_subcomplexes():
    X = br.s_alpha()
    Y = br.fixed_subcomplex(X, Z2.whole)
    assert Y.counts() == [2]
    D = builtin("dihedral", 8)
    Z = frattini_subgroup(D, 2)
    assert br.fixed_subcomplex(br.orbit(D), Z).n == 0
    assert br.fixed_subcomplex(br.point(D), Z).counts() == [1]


def test_strata_examples():
    D = builtin("dihedral", 8)
    S = br.strata(br.orbit(D))
    assert len(S) == 1 and S[0].subgroup.order == 1
    assert dims(homology_fp(S[0].coinvariants(2), 2, range(1)), 0) == [1]

    S = br.strata(br.s_alpha())
    assert sorted(s.subgroup.order for s in S) == [1, 2]

    C = br.dihedral_gamma_circle()
    J = br.join(C, C)
    assert len(br.isotropy_subgroups(J)) == 5
    # isotropy: e, the centre... up to conjugacy: e and two classes of reflections
    assert sorted(s.subgroup.order for s in br.strata(J)) == [1, 2, 2]


def test_rigidity_enforced():
    # Z/2 flipping an edge is not rigid; it is subdivided on construction
    X = br.GComplex(Z2, 2, [(0, 1)], [[0, 1], [1, 0]])
    assert X.subdivided and X.counts() == [3, 2]
    with pytest.raises(PreconditionError):
        br.GComplex(Z2, 2, [(0, 1)], [[0, 1], [1, 0]], subdivide=False)


ROUTE_GROUPS = [("cyclic", 2), ("cyclic", 4), ("cyclic", 8), ("dihedral", 8), ("quaternion", 8),
                ("elementary", 2, 2), ("abelian", 2, 4), ("cyclic", 3), ("elementary", 3, 2)]


@pytest.mark.parametrize("spec", ROUTE_GROUPS, ids=lambda s: "-".join(map(str, s)))
def test_routes_agree(spec):
    G = builtin(*spec)
    p = G.prime()
    rng = np.random.default_rng(hash(spec) % 2**32)
    corpus = fixture_complexes(G) + collapse_corpus(G, rng, 20)
    assert len(corpus) >= 20
    for X in corpus:
        top = X.dimension
        assert dims(br.bredon_homology_collapse(X, p, top), top) == \
            dims(br.bredon_homology_direct(X, p, top), top)


@pytest.mark.slow
def test_routes_agree_order_32():
    G = builtin("extraspecial", 2)
    rng = np.random.default_rng(32)
    for X in [br.point(G), br.orbit(G)] + collapse_corpus(G, rng, 4):
        top = X.dimension
        assert dims(br.bredon_homology_collapse(X, 2, top), top) == \
            dims(br.bredon_homology_direct(X, 2, top), top)


def test_collapse_refuses_non_p_groups():
    with pytest.raises(DomainError):
        br.bredon_homology_collapse(br.point(builtin("symmetric", 3)), 2)


def test_free_action_integral_is_orbit_space():
    G = builtin("cyclic", 4)
    X = br.join_power_sphere(G, br.orbit(G), 2)
    top = X.dimension
    H = br.bredon_homology_direct(X, 0, top)
    Q = homology_z(br.orbit_complex(X), range(0, top + 1))
    assert H.equal_on(Q, 0, top)


def test_e1_strata_examples():
    T = br.e1_from_strata(br.point(Z2), 2)
    assert {s for s, _ in T.entries} == {1}
    assert dims(T.column_sums(1), 1) == [1, 0]
    assert dims(br.e1_from_strata(br.s_alpha(), 2).column_sums(1), 1) == [2, 1]


@pytest.mark.parametrize("X", [br.dihedral_gamma_circle(), br.sign_sphere(Z2, Z2.trivial),
                               br.join(br.dihedral_gamma_circle(), br.dihedral_gamma_circle())],
                         ids=["gamma", "alpha", "gamma-join"])
def test_based_is_suspension(X):
    top = X.dimension + 1
    based = dims(br.e1_from_strata(X, 2, "based", top).column_sums(top), top)
    unred = dims(br.e1_from_strata(X, 2, "unreduced", top).column_sums(top), top)
    assert based == [unred[d - 1] + (d == 0) if d else 1 for d in range(top + 1)]
    susp = br.reduced(br.bredon_homology_direct(br.suspension(X), 2, top))
    assert based == dims(susp, top)


def test_column_sums_bound_direct_route():
    S = builtin("symmetric", 3)
    strict = False
    for p in (2, 3):
        for X in fixture_complexes(S):
            top = X.dimension
            e1 = dims(br.e1_from_strata(X, p, top=top).column_sums(top), top)
            direct = dims(br.bredon_homology_direct(X, p, top), top)
            assert all(a >= b for a, b in zip(e1, direct))
            strict |= e1 != direct
    assert strict


def test_e1_nerve_examples():
    V = builtin("elementary", 2, 2)
    assert dims(br.e1_nerve(V, None, 2, 4).column_sums(4), 4) == [1, 3, 5, 7, 9]
    F = family_from_maximal(Z2, [Z2.trivial])
    assert dims(br.e1_nerve(Z2, F, 2, 5).column_sums(5), 5) == [1] * 6
    Z4 = builtin("cyclic", 4)
    assert dims(br.e1_nerve(Z4, None, 2, 5).column_sums(5), 5) == [1] * 6


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_phi_elementary_matches_series(p, n):
    top = 5
    assert dims(br.phi_coefficients(builtin("elementary", p, n), p, top), top) == \
        poincare_mod_p(p, n, top).coefficients


@pytest.mark.parametrize("spec", [("cyclic", 4), ("dihedral", 8), ("quaternion", 8),
                                  ("abelian", 2, 4)], ids=lambda s: "-".join(map(str, s)))
def test_phi_frattini_reduction(spec):
    G = builtin(*spec)
    Q = quotient(G, frattini_subgroup(G, 2)).group
    assert dims(br.phi_coefficients(G, 2, 4), 4) == dims(br.phi_coefficients(Q, 2, 4), 4)


def test_phi_values():
    assert dims(br.phi_coefficients(Z2, 2, 4), 4) == [1, 1, 1, 1, 1]
    assert dims(br.phi_coefficients(builtin("dihedral", 8), 2, 4), 4) == [1, 3, 5, 7, 9]


def test_phi_refuses_non_p_groups():
    with pytest.raises(DomainError) as info:
        br.phi_coefficients(builtin("symmetric", 3), 2, 3)
    assert info.value.certificate == 1


def test_join_powers():
    a = br.sign_sphere(Z2, Z2.trivial)
    assert br.join_power_sphere(Z2, a, 1).counts() == [2]
    circle = br.join_power_sphere(Z2, a, 2)
    assert circle.counts() == [4, 4]
    assert all(m == 1 for k in circle.simplices for m in circle.isotropy_masks(k))
    J = br.join_power_sphere(builtin("dihedral", 8), br.dihedral_gamma_circle(), 3)
    assert J.dimension == 5
    H = homology_fp(J.chain_complex(2), 2, range(0, 6))
    assert dims(H, 5) == [1, 0, 0, 0, 0, 1]


def test_gcomplex_text_round_trip():
    X = br.s_alpha()
    Y = br.parse_gcomplex_text(br.format_gcomplex_text(X), X.group)
    assert Y.counts() == X.counts()
    assert dims(br.bredon_homology_direct(Y, 2), 1) == [2, 1]
