"""Subgroup posets, order complexes, reduced homology and closure retractions."""

import numpy as np
import pytest

from equihom.errors import ParseError, PreconditionError
from equihom.groups import all_subgroups, builtin, closure, frattini_subgroup, proper_family
from equihom.posets import (GPoset, antichain, chain_action, chain_poset, closure_retract,
                            count_chains, format_poset_text, order_complex, parse_poset_text,
                            reduced_chain_complex, reduced_homology, subgroup_poset_above)

TWO_GROUPS = [("cyclic", 2), ("cyclic", 4), ("cyclic", 8), ("dihedral", 8), ("quaternion", 8),
              ("abelian", 2, 4), ("elementary", 2, 3), ("extraspecial", 2)]


def test_poset_above_examples():
    V = builtin("elementary", 2, 2)
    F = proper_family(V)
    line = next(H for H in F if H.order == 2)
    assert subgroup_poset_above(V, F, line).n == 0
    P = subgroup_poset_above(V, F, V.trivial)
    assert P.n == 3 and not P.lt().any()

    D = builtin("dihedral", 8)
    P = subgroup_poset_above(D, proper_family(D), D.trivial)
    assert P.n == 8
    assert sorted(K.order for K in P.labels) == [2] * 5 + [4] * 3


def test_order_complex_examples():
    K = order_complex(antichain(3))
    assert K.counts() == [3]
    assert order_complex(chain_poset(2)).counts() == [2, 1]
    D = builtin("dihedral", 8)
    K = order_complex(subgroup_poset_above(D, proper_family(D), D.trivial))
    # the centre lies in all three order-4 subgroups, each non-central
    # involution in exactly one
    assert K.counts() == [8, 7]


def test_reduced_homology_examples():
    assert reduced_homology(antichain(0)).as_list(-1, 0) == [1, 0]
    assert reduced_homology(antichain(3)).as_list(-1, 0) == [0, 2]
    # theta graph as a poset nerve: two minima below three maxima
    leq = np.eye(5, dtype=bool)
    leq[:2, 2:] = True
    assert reduced_homology(GPoset(leq)).as_list(-1, 1) == [0, 0, 2]


@pytest.mark.parametrize("spec", TWO_GROUPS + [("symmetric", 3), ("alternating", 4)],
                         ids=lambda s: "-".join(map(str, s)))
def test_simplex_counts_agree(spec):
    G = builtin(*spec)
    F = proper_family(G)
    for H, _ in F.conjugacy_classes():
        P = subgroup_poset_above(G, F, H)
        assert order_complex(P).counts() == count_chains(P)


def test_closure_retract_examples():
    P = chain_poset(4)
    Q = closure_retract(P, [3, 3, 3, 3])
    assert Q.n == 1
    assert closure_retract(P, list(range(4))).n == 4
    with pytest.raises(PreconditionError):
        closure_retract(antichain(2), [1, 0])


def test_frattini_closure_retract_d8():
    D = builtin("dihedral", 8)
    Z = frattini_subgroup(D, 2)
    P = subgroup_poset_above(D, proper_family(D), D.trivial)
    index = {K.mask: i for i, K in enumerate(P.labels)}
    f = [index[closure(D, Z.elements(), base=K.mask).mask] for K in P.labels]
    Q = closure_retract(P, f)
    assert all(Z <= K for K in Q.labels) and Q.n == 4
    top = order_complex(P).dimension + 1
    assert reduced_homology(Q).as_list(-1, top) == [0] * (top + 2)


def test_retract_preserves_homology_random():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(2, 8))
        # random poset: transitive closure of a random upper-triangular relation
        R = np.triu(rng.random((n, n)) < 0.35, 1) | np.eye(n, dtype=bool)
        for _ in range(n):
            R = R | ((R.astype(int) @ R.astype(int)) > 0)
        P = GPoset(R)
        top = n
        # x -> the largest element among the maxima above x, if unique; else x
        f = []
        for x in range(n):
            ups = [y for y in range(n) if R[x, y]]
            f.append(max(ups) if all(R[y, max(ups)] for y in ups) else x)
        try:
            Q = closure_retract(P, f)
        except PreconditionError:
            continue
        assert reduced_homology(Q).as_list(-1, top) == reduced_homology(P).as_list(-1, top)


@pytest.mark.parametrize("spec", TWO_GROUPS, ids=lambda s: "-".join(map(str, s)))
def test_posets_below_frattini_are_contractible(spec):
    G = builtin(*spec)
    F = proper_family(G)
    Phi = frattini_subgroup(G, 2)
    for H, _ in F.conjugacy_classes():
        if Phi <= H:
            continue
        P = subgroup_poset_above(G, F, H)
        top = order_complex(P).dimension + 1
        assert reduced_homology(P).as_list(-1, top) == [0] * (top + 2)


@pytest.mark.parametrize("spec", [("dihedral", 8), ("alternating", 4), ("quaternion", 8)],
                         ids=lambda s: s[0])
def test_action_commutes_with_boundary(spec):
    G = builtin(*spec)
    P = subgroup_poset_above(G, proper_family(G), G.trivial)
    K = order_complex(P)
    C = reduced_chain_complex(K, 0)
    acts = chain_action(K)
    for k in C.degrees:
        if k - 1 not in C.degrees or k not in acts or k - 1 not in acts:
            continue
        d = C.boundary(k).toarray()
        for g in range(P.weyl.group.order):
            A = np.zeros((C.dim(k), C.dim(k)), dtype=np.int64)
            A[acts[k].perm[g], np.arange(C.dim(k))] = acts[k].sign[g]
            B = np.zeros((C.dim(k - 1), C.dim(k - 1)), dtype=np.int64)
            B[acts[k - 1].perm[g], np.arange(C.dim(k - 1))] = acts[k - 1].sign[g]
            assert (d @ A == B @ d).all()


def test_poset_text_round_trip():
    P = chain_poset(3)
    Q = parse_poset_text(format_poset_text(P))
    assert (Q.leq == P.leq).all()
    with pytest.raises(ParseError):
        parse_poset_text("poset 2\nleq 0 7\n")
