"""Presented coefficient rings, their model, the Bockstein and the integral form."""

import random

import pytest
import sympy

from equihom import rings as rg

MODP_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]
x = sympy.symbols("x")


def closed_form_modp(p, n):
    f = 1 / (1 - x) ** n
    for i in range(1, n + 1):
        f *= 1 + (p ** (i - 1) - 1) * x
    return f


def closed_form_integral(p, n):
    return closed_form_modp(p, n) / (1 + x)


def expand(f, top):
    s = sympy.series(f, x, 0, top + 1).removeO()
    return [int(s.coeff(x, k)) for k in range(top + 1)]


def y(R, v):
    return rg.gen_elem(R, R.gen_index(f"y[{v}]"))


def test_presentation_shapes():
    R = rg.presentation(2, 1)
    assert [g.name for g in R.gens] == ["y[1]"] and R.relations == []
    R = rg.presentation(2, 2)
    assert len(R.gens) == 3 and R.relation_degrees() == [2]
    R = rg.presentation(3, 2)
    kinds = sorted(g.name[0] for g in R.gens)
    assert kinds == ["t"] * 4 + ["u"] * 4
    assert {g.degree for g in R.gens if g.name[0] == "t"} == {2}
    assert {g.degree for g in R.gens if g.name[0] == "u"} == {1}


@pytest.mark.parametrize("p,n", MODP_CASES)
def test_series_match_closed_forms(p, n):
    top = 8
    assert rg.poincare_mod_p(p, n, top).coefficients == expand(closed_form_modp(p, n), top)
    assert rg.poincare_integral(p, n, top).coefficients == expand(closed_form_integral(p, n), top)


def test_series_examples():
    assert rg.poincare_mod_p(2, 2, 3).coefficients == [1, 3, 5, 7]
    assert rg.poincare_mod_p(3, 2, 3).coefficients == [1, 4, 7, 10]
    assert rg.poincare_mod_p(2, 3, 3).coefficients == [1, 7, 21, 43]
    assert rg.poincare_integral(2, 2, 3).coefficients == [1, 2, 3, 4]
    assert rg.poincare_integral(2, 1, 3).coefficients == [1, 0, 1, 0]
    assert rg.poincare_integral(3, 2, 3).coefficients == [1, 3, 4, 6]


@pytest.mark.parametrize("p,n", MODP_CASES)
def test_graded_dims_equal_series(p, n):
    top = 8 if (p, n) != (2, 3) else 6
    assert rg.graded_dims(rg.presentation(p, n), top) == rg.poincare_mod_p(p, n, top).coefficients
    assert rg.graded_dims(rg.presentation(p, n, "integral"), top) == \
        rg.poincare_integral(p, n, top).coefficients


def test_graded_dim_examples():
    assert rg.graded_dims(rg.presentation(2, 1), 4) == [1] * 5
    assert rg.graded_dims(rg.presentation(2, 2), 4) == [1, 3, 5, 7, 9]
    assert rg.graded_dims(rg.presentation(2, 1, "integral"), 4) == [1, 0, 1, 0, 1]


def test_model_identities():
    one = rg.model_one(2, 2)
    assert rg.model_element(2, 2, "y", (1, 0)) * rg.model_linear(2, 2, (1, 0)) == one
    ya, yb, yc = (rg.model_element(2, 2, "y", v) for v in [(1, 0), (0, 1), (1, 1)])
    assert (ya * yb + ya * yc + yb * yc).is_zero()
    ta, tb, tab = (rg.model_element(3, 2, "t", v) for v in [(1, 0), (0, 1), (1, 1)])
    assert (tb * tab + ta * tab - ta * tb).is_zero()
    # rescaling: t_{2a} = 2^{-1} t_a and u_{2a} = u_a
    assert rg.model_element(3, 2, "t", (2, 0)) == ta.scale(2)
    assert rg.model_element(3, 2, "u", (2, 0)) == rg.model_element(3, 2, "u", (1, 0))


@pytest.mark.parametrize("p,n", MODP_CASES)
def test_presentation_faithful_in_model(p, n):
    rep = rg.verify_presentation_in_model(p, n, 5 if (p, n) == (2, 3) else 6)
    assert rep.passed, rep.notes
    assert all(gd == s == mr for _, gd, s, mr in rep.rows)


def test_bockstein_examples():
    R = rg.presentation(3, 2)
    t = rg.gen_elem(R, R.gen_index("t[10]"))
    assert rg.bockstein(R, t) == {}
    ua = rg.gen_elem(R, R.gen_index("u[10]"))
    ub = rg.gen_elem(R, R.gen_index("u[01]"))
    assert rg.bockstein(R, ua) == rg.one(R)
    expected = rg.elem_add(R, ub, ua, coeffs=[1, -1])
    assert rg.bockstein(R, rg.elem_mul(R, ua, ub)) == expected


def test_bockstein_matches_model():
    # beta(y) = 1 in the presented ring agrees with the model's beta(1/x) = 1
    assert (rg.model_bockstein(rg.model_element(2, 1, "y", (1,))) - rg.model_one(2, 1)).is_zero()
    u = rg.model_element(3, 1, "u", (1,))
    assert (rg.model_bockstein(u) - rg.model_one(3, 1)).is_zero()
    assert rg.model_bockstein(rg.model_element(3, 1, "t", (1,))).is_zero()


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2)])
def test_bockstein_squares_zero_random(p, n):
    R = rg.presentation(p, n)
    rng = random.Random(p * 10 + n)
    for _ in range(100):
        m = tuple(rng.randint(0, 1 if g.odd else 3) for g in R.gens)
        b2 = rg.bockstein(R, rg.bockstein(R, {m: 1}))
        assert rg._in_relation_span(R, b2)


@pytest.mark.parametrize("p,n", MODP_CASES)
def test_bockstein_suite(p, n):
    top = 5 if (p, n) == (2, 3) else 6
    rep = rg.bockstein_homology_check(p, n, top)
    assert rep.passed, rep.notes
    assert rg.bockstein_kernel_dims(p, n, top) == rg.poincare_integral(p, n, top).coefficients


def test_kernel_examples():
    assert rg.bockstein_kernel_dims(2, 2, 4) == [1, 2, 3, 4, 5]
    assert rg.bockstein_kernel_dims(2, 1, 4) == [1, 0, 1, 0, 1]
    assert rg.bockstein_kernel_dims(3, 1, 4) == [1, 0, 1, 0, 1]


@pytest.mark.parametrize("p,n,dims", [(2, 2, [1, 2, 3, 4, 5]), (3, 2, [1, 3, 4, 6, 7])])
def test_integral_presentation(p, n, dims):
    rep = rg.integral_presentation_check(p, n, 4)
    assert rep.passed, rep.notes
    assert [row[1:] for row in rep.rows] == [(d, d, d) for d in dims]
    assert [rg.integral_image_rank(p, n, d) for d in range(5)] == dims


def test_integral_relation_maps_to_zero():
    RZ, Rp = rg.presentation(2, 2, "integral"), rg.presentation(2, 2)
    a, b = (rg.gen_elem(RZ, RZ.gen_index(f"yt[{v}]")) for v in ("01", "11"))
    t0 = rg.gen_elem(RZ, RZ.gen_index("t[10]"))
    # yt at alpha_0 is zero, so the three-term sum reduces to one product
    rel = rg.elem_add(RZ, rg.elem_mul(RZ, a, b), t0)
    img = rg.integral_to_modp(RZ, Rp, rel)
    assert img and rg._in_relation_span(Rp, img)
