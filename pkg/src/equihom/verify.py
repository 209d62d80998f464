"""The acceptance suite: one function per criterion, each returning a Criterion."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from . import bredon as br
from . import extraspecial as ex
from . import linalg as la
from . import rings
from .chains import check_universal_coefficients, random_integral_complex
from .groups import builtin, frattini_subgroup, non_pgroup_vanishing_certificate, quotient
from .posets import order_complex, reduced_chain_complex, subgroup_poset_above

DEFAULT_SEED = 20240611


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self, timing: bool = False) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status}\t{self.number}\t{self.title}"
        return out + (f"\t{self.seconds:.1f}s" if timing else "")


def _timed(number: int, title: str, fn: Callable[[], tuple[bool, list[str]]]) -> Criterion:
    t = time.perf_counter()
    ok, details = fn()
    return Criterion(number, title, bool(ok), details, time.perf_counter() - t)


# ---------------------------------------------------------------------------
# fixtures


COLLAPSE_GROUPS = [("cyclic", (2,)), ("cyclic", (4,)), ("dihedral", (8,)),
                   ("quaternion", ()), ("elementary", (2, 2))]


def fixture_complexes(G) -> list[br.GComplex]:
    """Deterministic complexes: point, orbits, their suspensions and joins."""
    from .groups import conjugacy_classes_of_subgroups
    out = [br.point(G), br.trivial_sphere0(G)]
    for H, _ in conjugacy_classes_of_subgroups(G):
        O = br.orbit(G, H)
        out.append(O)
        out.append(br.suspension(O))
    if G.order == 8 and not G.is_abelian() and sum(G.element_order(g) == 2 for g in range(8)) == 5:
        out.append(br.dihedral_gamma_circle(G, *_d8_generators(G)))
    return out


def _d8_generators(G):
    """A rotation of order 4 and a non-central reflection, with their matrices."""
    r = next(g for g in range(G.order) if G.element_order(g) == 4)
    center = {g for g in range(G.order) if all(G.mul(g, h) == G.mul(h, g) for h in range(G.order))}
    s = next(g for g in range(G.order) if G.element_order(g) == 2 and g not in center)
    return [r, s], [[[0, -1], [1, 0]], [[1, 0], [0, -1]]]


def collapse_corpus(G, rng: np.random.Generator, count: int = 20) -> list[br.GComplex]:
    out = fixture_complexes(G)
    target = len(out) + count
    while len(out) < target:
        out.append(br.random_gcomplex(G, rng, n_orbits=int(rng.integers(1, 4)),
                                      n_simplices=int(rng.integers(1, 5)),
                                      max_dim=int(rng.integers(1, 3))))
    return out


# ---------------------------------------------------------------------------
# criteria


def criterion_1(seed: int = DEFAULT_SEED) -> Criterion:
    def run():
        rng = np.random.default_rng(seed)
        ok, det = True, []
        for name, params in COLLAPSE_GROUPS:
            G = builtin(name, *params)
            corpus = collapse_corpus(G, rng)
            agree = 0
            for X in corpus:
                top = max(X.dimension, 0)
                a = br.bredon_homology_direct(X, 2, top).as_list(0, top)
                b = br.bredon_homology_collapse(X, 2, top).as_list(0, top)
                agree += a == b
            ok &= agree == len(corpus)
            det.append(f"{G.name}: {agree}/{len(corpus)} complexes agree")
        return ok, det
    return _timed(1, "collapse route equals direct orbit-category route", run)


def criterion_2() -> Criterion:
    def run():
        X = br.s_alpha()
        coh = br.bredon_cohomology(X, 2, 1).as_list(0, 1)
        hom = br.bredon_homology_direct(X, 2, 1).as_list(0, 1)
        return coh == [1, 0] and hom == [2, 1], [f"cohomology {coh}", f"homology {hom}"]
    return _timed(2, "S^alpha cohomology (1,0) vs homology (2,1)", run)


def criterion_3(top: int = 6) -> Criterion:
    def run():
        ok, det = True, []
        for p, n in [(2, 1), (2, 2), (2, 3), (3, 2)]:
            G = builtin("elementary", p, n)
            got = br.phi_coefficients(G, p, top).as_list(0, top)
            want = rings.poincare_mod_p(p, n, top).coefficients
            ok &= got == want
            det.append(f"(Z/{p})^{n}: phi {got} series {want}")
        return ok, det
    return _timed(3, "phi of elementary abelian groups equals the Poincare series", run)


def criterion_4(top: int = 4) -> Criterion:
    def run():
        def phi(name, *params):
            return br.phi_coefficients(builtin(name, *params), 2, top).as_list(0, top)
        z4, z2 = phi("cyclic", 4), phi("cyclic", 2)
        d8, q8, v4 = phi("dihedral", 8), phi("quaternion"), phi("elementary", 2, 2)
        # the Frattini quotients themselves, built from the groups
        quots = []
        for name, params in [("cyclic", (4,)), ("dihedral", (8,)), ("quaternion", ()),
                             ("abelian", (2, 4))]:
            G = builtin(name, *params)
            Q = quotient(G, frattini_subgroup(G, 2)).group
            quots.append((G.name, br.phi_coefficients(G, 2, top).as_list(0, top),
                          br.phi_coefficients(Q, 2, top).as_list(0, top)))
        ok = z4 == z2 and d8 == q8 == v4 and all(a == b for _, a, b in quots)
        det = [f"Z/4 {z4} Z/2 {z2}", f"D8 {d8} Q8 {q8} (Z/2)^2 {v4}"]
        det += [f"{name}: {a} vs G/Frattini {b}" for name, a, b in quots]
        return ok, det
    return _timed(4, "Frattini reduction of phi", run)


P_GROUPS = [("cyclic", (2,)), ("cyclic", (4,)), ("cyclic", (8,)), ("cyclic", (3,)),
            ("cyclic", (9,)), ("elementary", (2, 2)), ("elementary", (2, 3)),
            ("elementary", (3, 2)), ("dihedral", (8,)), ("quaternion", ()),
            ("abelian", (2, 4)), ("extraspecial", (1,)), ("extraspecial", (2,))]


def criterion_5() -> Criterion:
    def run():
        ok, det = True, []
        for name, params in [("symmetric", (3,)), ("cyclic", (6,)), ("alternating", (4,))]:
            G = builtin(name, *params)
            c = non_pgroup_vanishing_certificate(G)
            ok &= c == 1
            det.append(f"{G.name}: {c}")
        for name, params in P_GROUPS:
            G = builtin(name, *params)
            c = non_pgroup_vanishing_certificate(G)
            ok &= c == G.prime()
            det.append(f"{G.name}: {c}")
        return ok, det
    return _timed(5, "gcd certificate: 1 for non-p-groups, p for p-groups", run)


RING_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]


def criterion_6(top: int = 6) -> Criterion:
    def run():
        ok, det = True, []
        for p, n in RING_CASES:
            rep = rings.verify_presentation_in_model(p, n, top)
            ok &= rep.passed
            det.append(f"{rep.line()}: " + " ".join(f"{d}:{g}/{s}/{m}" for d, g, s, m in rep.rows))
        return ok, det
    return _timed(6, "presentation dims = model rank = series coefficient", run)


def criterion_7(top: int = 6) -> Criterion:
    def run():
        ok, det = True, []
        for p, n in RING_CASES:
            b = rings.bockstein_homology_check(p, n, top)
            i = rings.integral_presentation_check(p, n, top)
            ok &= b.passed and i.passed
            det.append(f"{b.line()}; {'; '.join(b.notes)}")
            det.append(f"{i.line()}: " + " ".join(f"{d}:{g}/{k}/{s}" for d, g, k, s in i.rows))
        return ok, det
    return _timed(7, "Bockstein: exact, and its kernel is the integral ring", run)


EXPECTED_COUNTS = {1: [2], 2: [9, 6], 3: [35, 105, 30]}


def criterion_8() -> Criterion:
    def run():
        ok, det = True, []
        for n, want in EXPECTED_COUNTS.items():
            rows = ex.isotropic_counts(n)
            got = [e for _, e, _ in rows]
            ok &= got == want
            for k, e, printed in rows:
                flag = "" if e == printed else "\tdiffers from printed formula"
                det.append(f"n={n} k={k}\t{e}\t{printed}{flag}")
        return ok, det
    return _timed(8, "q-isotropic subspace counts", run)


def criterion_9(deep: bool = True) -> Criterion:
    def run():
        ok, det = True, []
        cases = [1, 2] + ([3] if deep else [])
        want = {1: 3, 2: 31, 3: 1149}
        for n in cases:
            h = ex.decorated_homology(n, with_module=False)
            top = h.dims[n - 1]
            rec = ex.dimension_recursion(n)
            ok &= h.concentrated and top == rec == want[n]
            det.append(f"n={n}: H_{n - 1} = {top}, recursion {rec}, concentrated {h.concentrated}")
        if not deep:
            det.append("n=3 skipped (needs --deep)")
        return ok, det
    return _timed(9, "decorated poset homology and the dimension recursion", run)


def criterion_10() -> Criterion:
    def run():
        ok, det = True, []
        for n in (2, 3):
            h = ex.tits_building_homology(n)
            r = h.dims[n - 1]
            ok &= h.concentrated and r == 2 ** (n * (n - 1))
            det.append(f"n={n}: rank {r}, concentrated {h.concentrated}, counts {h.counts}")
        return ok, det
    return _timed(10, "undecorated isotropic poset rank 2^{n(n-1)}", run)


def criterion_11(N: int = 3, top: int = 3) -> Criterion:
    def run():
        lhs = ex.final_theorem_lhs_oracle(1, N, top).as_list(0, top)
        rhs = ex.final_theorem_rhs(1, top).as_list(0, top)
        ok = lhs == rhs and lhs[:3] == [1, 2, 3]
        return ok, [f"join oracle N={N}: {lhs}", f"assembly: {rhs}"]
    return _timed(11, "final assembly at n=1 against the join oracle", run)


def all_constructed_complexes(seed: int = DEFAULT_SEED):
    """Chain complexes from every constructor, for the d o d check."""
    rng = np.random.default_rng(seed)
    out = []
    for name, params in COLLAPSE_GROUPS + [("symmetric", (3,)), ("alternating", (4,))]:
        G = builtin(name, *params)
        for X in collapse_corpus(G, rng, count=4):
            out.append(X.chain_complex(0))
    D8 = builtin("dihedral", 8)
    gam = br.dihedral_gamma_circle()
    out += [br.s_alpha().chain_complex(0), gam.chain_complex(0),
            br.join(gam, gam).chain_complex(0)]
    from .groups import proper_family
    F = proper_family(D8)
    for H, _ in F.conjugacy_classes():
        out.append(reduced_chain_complex(order_complex(subgroup_poset_above(D8, F, H)), 0))
    for n in (1, 2):
        out.append(reduced_chain_complex(order_complex(ex.decorated_poset(n)), 0))
    for _ in range(20):
        out.append(random_integral_complex(rng))
    return out


def _d_squared_zero(C) -> bool:
    for k in C.degrees:
        a, b = C.boundary(k), C.boundary(k + 1)
        if a.shape[1] and b.shape[1] and a.shape[0]:
            if (sp.csr_matrix(a) @ sp.csr_matrix(b)).count_nonzero():
                return False
    return True


def criterion_12(seed: int = DEFAULT_SEED) -> Criterion:
    def run():
        rng = np.random.default_rng(seed)
        cx = all_constructed_complexes(seed)
        dd = all(_d_squared_zero(C) for C in cx)
        snf_ok = 0
        for _ in range(100):
            r, c = (int(x) for x in rng.integers(1, 7, size=2))
            M = rng.integers(-9, 10, size=(r, c)).tolist()
            U, D, V = la.smith_normal_form(M)
            diag = [D[i][i] for i in range(min(r, c))]
            off = all(D[i][j] == 0 for i in range(r) for j in range(c) if i != j)
            good = (la.int_matmul(la.int_matmul(U, M), V) == D and off
                    and la.is_divisibility_chain(diag)
                    and abs(la.int_det(U)) == 1 and abs(la.int_det(V)) == 1)
            snf_ok += good
        uct_ok = 0
        for _ in range(20):
            C = random_integral_complex(rng)
            uct_ok += all(check_universal_coefficients(C, p) for p in (2, 3))
        ok = dd and snf_ok == 100 and uct_ok == 20
        return ok, [f"d o d = 0 on {len(cx)} complexes: {dd}",
                    f"SNF U M V = D: {snf_ok}/100", f"universal coefficients: {uct_ok}/20"]
    return _timed(12, "linear algebra kernel: dd=0, SNF, universal coefficients", run)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
            11: criterion_11, 12: criterion_12}


def run_all(seed: int = DEFAULT_SEED, deep: bool = True) -> list[Criterion]:
    out = []
    for k, fn in CRITERIA.items():
        if k in (1, 12):
            out.append(fn(seed))
        elif k == 9:
            out.append(fn(deep))
        else:
            out.append(fn())
    return out
