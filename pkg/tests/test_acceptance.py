"""Acceptance suite: one verdict line per criterion, all at exact equality.

Run directly (``python tests/test_acceptance.py``) to print only the lines.
"""

import pytest

from equihom import bredon as br
from equihom import extraspecial as ex
from equihom import verify

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def record(c: verify.Criterion) -> verify.Criterion:
    line = c.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    for d in c.details:
        print("#\t" + d)
    return c


def test_criterion_1_collapse_equals_direct():
    c = record(verify.criterion_1(verify.DEFAULT_SEED))
    assert c.passed


def test_criterion_2_homology_cohomology_asymmetry():
    c = record(verify.criterion_2())
    X = br.s_alpha()
    assert br.bredon_cohomology(X, 2).as_list(0, 1) == [1, 0]
    assert br.bredon_homology_direct(X, 2).as_list(0, 1) == [2, 1]
    assert c.passed


def test_criterion_3_phi_elementary_abelian():
    c = record(verify.criterion_3(top=6))
    assert c.passed


def test_criterion_4_frattini_reduction():
    c = record(verify.criterion_4(top=4))
    assert c.passed


def test_criterion_5_vanishing_certificate():
    c = record(verify.criterion_5())
    assert c.passed


def test_criterion_6_presentation_model_series():
    c = record(verify.criterion_6(top=6))
    assert c.passed


def test_criterion_7_bockstein():
    c = record(verify.criterion_7(top=6))
    assert c.passed


def test_criterion_8_isotropic_counts():
    c = record(verify.criterion_8())
    got = {n: [ex.count_q_isotropic(n, k) for k in range(1, n + 1)] for n in (1, 2, 3)}
    assert got == {1: [2], 2: [9, 6], 3: [35, 105, 30]}
    assert c.passed


def test_criterion_9_decorated_poset_homology():
    c = record(verify.criterion_9(deep=True))
    assert [ex.dimension_recursion(n) for n in (1, 2, 3)] == [3, 31, 1149]
    assert c.passed


def test_criterion_10_solomon_tits():
    c = record(verify.criterion_10())
    assert [ex.tits_building_rank(n) for n in (2, 3)] == [4, 64]
    assert c.passed


def test_criterion_11_final_assembly_n1():
    c = record(verify.criterion_11(N=3, top=3))
    assert ex.final_theorem_lhs_oracle(1, 3, 3).as_list(0, 3) == [1, 2, 3, 4]
    assert c.passed


def test_criterion_12_linear_algebra_kernel():
    c = record(verify.criterion_12(verify.DEFAULT_SEED))
    assert c.passed


if __name__ == "__main__":
    import sys
    failed = 0
    for c in verify.run_all(deep=True):
        print(c.line())
        failed += not c.passed
    sys.exit(1 if failed else 0)
