"""Finite groups as multiplication tables: subgroups, Weyl groups, Frattini, families."""

import itertools

import pytest

from equihom.errors import DomainError, ParseError, PreconditionError
from equihom.groups import (Family, all_subgroups, builtin, closure, conjugacy_classes_of_subgroups,
                            format_group_text, frattini_subgroup, height, is_normal,
                            non_pgroup_vanishing_certificate, normalizer, parse_builtin_spec,
                            parse_group_text, proper_family, quotient, weyl_group)

BUILTINS = [("trivial",), ("cyclic", 2), ("cyclic", 4), ("cyclic", 6), ("elementary", 2, 2),
            ("elementary", 2, 3), ("elementary", 3, 2), ("abelian", 2, 4), ("dihedral", 8),
            ("quaternion", 8), ("symmetric", 3), ("alternating", 4), ("extraspecial", 1)]


def brute_subgroups(G):
    """Every subgroup of a small group is generated by at most two elements here."""
    found = set()
    for a, b in itertools.product(range(G.order), repeat=2):
        found.add(closure(G, [a, b]).mask)
    return found


@pytest.mark.parametrize("spec", BUILTINS, ids=lambda s: "-".join(map(str, s)))
def test_group_axioms(spec):
    G = builtin(*spec)
    M = G.mult
    n = G.order
    for a in range(n):
        assert M[0, a] == a and M[a, 0] == a
        assert any(M[a, b] == 0 and M[b, a] == 0 for b in range(n))
    for a, b, c in itertools.product(range(n), repeat=3):
        assert M[M[a, b], c] == M[a, M[b, c]]


@pytest.mark.parametrize("spec,count", [(("trivial",), 1), (("elementary", 2, 2), 5),
                                        (("dihedral", 8), 10), (("quaternion", 8), 6),
                                        (("symmetric", 3), 6), (("alternating", 4), 10)])
def test_subgroup_counts(spec, count):
    G = builtin(*spec)
    subs = all_subgroups(G)
    assert len(subs) == count
    assert all(S.is_closed() for S in subs)
    if G.order <= 12:
        assert {S.mask for S in subs} == brute_subgroups(G)


@pytest.mark.parametrize("spec,classes", [(("elementary", 2, 2), 5), (("dihedral", 8), 8),
                                          (("symmetric", 3), 4)])
def test_conjugacy_classes(spec, classes):
    G = builtin(*spec)
    cc = conjugacy_classes_of_subgroups(G)
    assert len(cc) == classes
    assert sum(size for _, size in cc) == len(all_subgroups(G))


def test_s3_class_sizes():
    G = builtin("symmetric", 3)
    sizes = sorted((H.order, size) for H, size in conjugacy_classes_of_subgroups(G))
    assert sizes == [(1, 1), (2, 3), (3, 1), (6, 1)]


def _is_elementary_abelian(W, p):
    return W.is_abelian() and all(W.power(g, p) == 0 for g in range(W.order))


def test_weyl_groups():
    V = builtin("elementary", 2, 2)
    W = weyl_group(V, V.trivial)
    assert W.group.order == 4 and _is_elementary_abelian(W.group, 2)

    D = builtin("dihedral", 8)
    Z = frattini_subgroup(D, 2)
    W = weyl_group(D, Z)
    assert W.group.order == 4 and _is_elementary_abelian(W.group, 2)

    S = builtin("symmetric", 3)
    C3 = next(H for H in all_subgroups(S) if H.order == 3)
    W = weyl_group(S, C3)
    assert W.group.order == 2


@pytest.mark.parametrize("spec", [("dihedral", 8), ("symmetric", 3), ("alternating", 4),
                                  ("quaternion", 8)], ids=lambda s: s[0])
def test_weyl_quotient_map(spec):
    G = builtin(*spec)
    for H in all_subgroups(G):
        N = normalizer(G, H)
        W = weyl_group(G, H)
        assert W.group.order == N.order // H.order
        proj = W.projection
        kernel = [g for g in N.elements() if proj[g] == 0]
        assert sorted(kernel) == H.elements()
        assert sorted({int(proj[g]) for g in N.elements()}) == list(range(W.group.order))
        for a in N.elements():
            for b in N.elements():
                assert proj[G.mul(a, b)] == W.group.mul(proj[a], proj[b])


def test_frattini_examples():
    assert frattini_subgroup(builtin("elementary", 2, 3), 2).order == 1
    D = builtin("dihedral", 8)
    Z = frattini_subgroup(D, 2)
    assert Z.order == 2
    assert all(D.mul(z, g) == D.mul(g, z) for z in Z.elements() for g in range(8))
    assert frattini_subgroup(builtin("cyclic", 4), 2).order == 2


@pytest.mark.parametrize("spec", [("cyclic", 4), ("dihedral", 8), ("quaternion", 8),
                                  ("abelian", 2, 4), ("extraspecial", 1), ("extraspecial", 2)],
                         ids=lambda s: "-".join(map(str, s)))
def test_burnside_basis(spec):
    G = builtin(*spec)
    P = frattini_subgroup(G, 2)
    assert is_normal(G, P)
    Q = quotient(G, P).group
    assert _is_elementary_abelian(Q, 2)
    for K in all_subgroups(G):
        if K.order < G.order:
            assert closure(G, P.elements(), base=K.mask).order < G.order


def test_families_and_heights():
    V = builtin("elementary", 2, 2)
    F = proper_family(V)
    assert len(F) == 4
    line = next(H for H in F if H.order == 2)
    assert height(F, line) == 1 and height(F, V.trivial) == 2
    assert [H.order for H in proper_family(builtin("cyclic", 3))] == [1]

    D = builtin("dihedral", 8)
    FD = proper_family(D)
    assert height(FD, D.trivial) == 3
    for H in FD:
        for K in FD:
            if H != K and H.mask & K.mask == H.mask:
                assert height(FD, H) > height(FD, K)


def test_family_must_be_closed():
    D = builtin("dihedral", 8)
    Z = frattini_subgroup(D, 2)
    with pytest.raises(PreconditionError):
        Family(D, [Z])


@pytest.mark.parametrize("spec,cert", [(("symmetric", 3), 1), (("cyclic", 6), 1),
                                       (("alternating", 4), 1), (("dihedral", 8), 2),
                                       (("elementary", 3, 2), 3), (("cyclic", 9), 3)])
def test_vanishing_certificate(spec, cert):
    assert non_pgroup_vanishing_certificate(builtin(*spec)) == cert


def test_group_text_round_trip():
    G = builtin("dihedral", 8)
    H = parse_group_text(format_group_text(G))
    assert H.order == 8 and (H.mult == G.mult).all()


def test_group_parse_errors():
    with pytest.raises(ParseError):
        parse_group_text("order 2\n0 1\n1 x\n")
    with pytest.raises(DomainError):
        parse_builtin_spec("nonsense-3")
    with pytest.raises(ParseError):
        parse_builtin_spec("cyclic-x")
