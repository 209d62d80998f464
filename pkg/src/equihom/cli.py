"""Command-line entry point: ``equihom <subcommand> ...``.

Every subcommand writes TSV, then a trailer of ``PASS``/``FAIL`` lines for
the checks it ran.  Exit status: 0 all checks pass, 1 a check failed,
2 usage or parse error, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bredon as br
from . import extraspecial as ex
from . import rings
from . import verify
from .errors import DomainError, EquihomError, ParseError, PreconditionError, SizeCapError
from .groups import (FiniteGroup, all_subgroups, conjugacy_classes_of_subgroups,
                     frattini_subgroup, is_prime, non_pgroup_vanishing_certificate, parse_builtin_spec,
                     parse_group_text, proper_family, quotient)
from .posets import (GPoset, count_chains, order_complex, parse_poset_text,
                     reduced_chain_complex, subgroup_poset_above)
from .chains import homology_fp

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
MAX_JOIN = 4        # the 4-fold join of S(gamma) has about 2.5e5 simplices


class Report:
    """Collects output rows and check results."""

    def __init__(self):
        self.rows: list[str] = []
        self.checks: list[tuple[bool, str]] = []

    def add(self, *cols) -> None:
        self.rows.append("\t".join(str(c) for c in cols))

    def comment(self, text: str) -> None:
        self.rows.append(f"# {text}")

    def check(self, ok: bool, text: str) -> None:
        self.checks.append((bool(ok), text))

    def text(self) -> str:
        lines = self.rows + [f"{'PASS' if ok else 'FAIL'}\t{t}" for ok, t in self.checks]
        return "\n".join(lines) + "\n"

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks)


# ---------------------------------------------------------------------------
# input resolution


def load_group(spec: str) -> FiniteGroup:
    """A group file path, or a builtin spec such as ``elementary-2-2``."""
    path = Path(spec)
    if path.is_file():
        return parse_group_text(path.read_text())
    return parse_builtin_spec(spec)


FIXTURES = ("point", "sphere0", "s-alpha[-k]", "gamma-circle", "gamma-join-N",
            "gamma-sphere-N", "orbit-i", "suspended-orbit-i", "random-SEED")


def _index_two_kernels(G: FiniteGroup):
    return [H for H in all_subgroups(G) if 2 * H.order == G.order]


def load_complex(spec: str, G: FiniteGroup) -> br.GComplex:
    """A complex file path, or a fixture name (see ``FIXTURES``)."""
    path = Path(spec)
    if path.is_file():
        return br.parse_gcomplex_text(path.read_text(), G)
    parts = spec.split("-")
    name, arg = parts[0], parts[1:]

    def need_int(tok):
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"bad fixture {spec!r}", token=tok) from None

    if spec == "point":
        return br.point(G)
    if spec == "sphere0":
        return br.trivial_sphere0(G)
    if spec.startswith("s-alpha"):
        kernels = _index_two_kernels(G)
        k = need_int(parts[2]) if len(parts) > 2 else 0
        if not 0 <= k < len(kernels):
            raise PreconditionError(f"{G.name} has {len(kernels)} index-2 subgroups")
        return br.suspension(br.sign_sphere(G, kernels[k]))
    if spec.startswith("gamma-"):
        gens, mats = verify._d8_generators(G) if G.order == 8 else (None, None)
        if gens is None:
            raise PreconditionError("gamma fixtures need a dihedral group of order 8")
        circle = br.dihedral_gamma_circle(G, gens, mats)
        if spec == "gamma-circle":
            return circle
        kind = "-".join(parts[:2])
        if kind in ("gamma-join", "gamma-sphere"):
            N = need_int(parts[2]) if len(parts) > 2 else 1
            X = br.join_power_sphere(G, circle, N)
            return br.suspension(X) if kind == "gamma-sphere" else X
    if name in ("orbit", "suspended") and arg:
        i = need_int(arg[-1])
        classes = conjugacy_classes_of_subgroups(G)
        if not 0 <= i < len(classes):
            raise PreconditionError(f"{G.name} has {len(classes)} subgroup classes")
        O = br.orbit(G, classes[i][0])
        return br.suspension(O) if name == "suspended" else O
    if name == "random" and arg:
        rng = np.random.default_rng(need_int(arg[0]))
        return br.random_gcomplex(G, rng)
    raise ParseError(f"unknown complex {spec!r}; fixtures: {', '.join(FIXTURES)}", token=spec)


# ---------------------------------------------------------------------------
# subcommands


def cmd_group(args, R: Report) -> None:
    G = load_group(args.group)
    subs = all_subgroups(G)
    classes = conjugacy_classes_of_subgroups(G)
    p = G.prime()
    R.add("key", "value")
    R.add("name", G.name or "-")
    R.add("order", G.order)
    R.add("abelian", int(G.is_abelian()))
    R.add("subgroups", len(subs))
    R.add("subgroup-classes", len(classes))
    R.add("p-group", p if p else "no")
    cert = non_pgroup_vanishing_certificate(G)
    R.add("certificate", cert)
    if p:
        Phi = frattini_subgroup(G, p)
        R.add("frattini-order", Phi.order)
        R.check(cert == p, f"gcd certificate equals p = {p}")
    elif G.order > 1:
        R.check(cert == 1, "gcd certificate equals 1 for a non-p-group")
    if args.subgroups:
        F = proper_family(G)
        R.comment("proper subgroup classes")
        R.add("class", "order", "class-size", "height")
        for i, (H, size) in enumerate(classes):
            h = F.height(H) if H in F else 0
            R.add(i, H.order, size, h)
    R.check(all(H.is_closed() for H in subs), "every enumerated subgroup is closed")


def _poset_from_args(args) -> GPoset:
    if args.file:
        G = load_group(args.group) if args.group else None
        return parse_poset_text(Path(args.file).read_text(), G)
    if not args.group:
        raise PreconditionError("pass --group (with --family) or --file")
    G = load_group(args.group)
    if args.family != "proper":
        raise PreconditionError("only the proper family is built in")
    F = proper_family(G)
    classes = F.conjugacy_classes()
    if not 0 <= args.above < len(classes):
        raise PreconditionError(f"--above must be in 0..{len(classes) - 1}")
    return subgroup_poset_above(G, F, classes[args.above][0])


def cmd_poset(args, R: Report) -> None:
    P = _poset_from_args(args)
    K = order_complex(P)
    C = reduced_chain_complex(K, args.p)
    top = max(K.dimension, 0)
    H = homology_fp(C, args.p, range(-1, top + 1))
    if args.export:
        R.rows.extend(K.export().splitlines())
        return
    R.comment(f"poset with {P.n} elements; simplices per dimension {K.counts()}")
    R.add("degree", "dim")
    for k in range(-1, top + 1):
        R.add(k, H[k])
    chi = sum((-1) ** k * c for k, c in enumerate(K.counts())) - 1
    R.check(chi == sum((-1) ** k * H[k] for k in range(-1, top + 1)),
            "reduced Euler characteristic matches homology")
    R.check(count_chains(P) == K.counts(), "chain counts by dynamic programming")


def _fmt_dims(H, k):
    t = H.torsion.get(k)
    return f"{H[k]}" + (f"\t{','.join(map(str, t))}" if t else "")


def cmd_bredon(args, R: Report) -> None:
    G = load_group(args.group)
    X = load_complex(args.complex, G)
    m = br.parse_coefficients(args.coeff)
    top = X.dimension if args.max_degree is None else args.max_degree
    R.comment(f"{G.name}-complex with simplex counts {X.counts()}")
    if args.cohomology:
        H = br.bredon_cohomology(X, m, top)
        R.add("degree", "dim")
        for k in range(0, top + 1):
            R.add(k, _fmt_dims(H, k))
        return
    if args.route == "direct":
        H = br.bredon_homology_direct(X, m, top)
        R.add("degree", "dim")
        for k in range(0, top + 1):
            R.add(k, _fmt_dims(H, k))
        return
    if not is_prime(m):
        raise PreconditionError("the collapse route works over F_p only")
    if not G.is_p_group(m):
        raise DomainError(f"the collapse route needs a {m}-group")
    Hc = br.bredon_homology_collapse(X, m, top)
    if args.route == "collapse":
        R.add("degree", "dim")
        for k in range(0, top + 1):
            R.add(k, Hc[k])
        return
    Hd = br.bredon_homology_direct(X, m, top)
    R.add("degree", "direct", "collapse")
    for k in range(0, top + 1):
        R.add(k, Hd[k], Hc[k])
    R.check(Hd.as_list(0, top) == Hc.as_list(0, top), "collapse route equals direct route")


def cmd_e1(args, R: Report) -> None:
    G = load_group(args.group)
    p = args.p
    top = args.max_degree
    if args.flavor == "nerve":
        if args.family != "proper":
            raise PreconditionError("only the proper family is built in")
        T = br.e1_nerve(G, proper_family(G), p, top)
    else:
        if not args.complex:
            raise PreconditionError(f"flavor {args.flavor} needs --complex")
        X = load_complex(args.complex, G)
        flavor = "based" if args.flavor == "based" else "unreduced"
        T = br.e1_from_strata(X, p, flavor, top)
    R.comment(f"E1 ({T.flavor} flavor) over F_{p}")
    R.add("h", "q", "dim")
    for (s, q), v in sorted(T.entries.items()):
        if s + q <= top:
            R.add(s, q, v)
    sums = T.column_sums(top)
    R.comment("totals by degree h+q")
    R.add("degree", "dim")
    for k in range(0, top + 1):
        R.add(k, sums[k])
    if args.flavor == "strata":
        Hd = br.bredon_homology_direct(X, p, top)
        if G.is_p_group(p):
            R.check(sums.as_list(0, top) == Hd.as_list(0, top),
                    "E1 totals equal direct Bredon homology (p-group)")
        else:
            R.check(all(sums[k] >= Hd[k] for k in range(top + 1)),
                    "E1 totals bound direct Bredon homology")
            R.comment("not a p-group: no convergence claimed")
    elif not G.is_p_group(p):
        R.comment("not a p-group: E1 reported without any convergence claim")


def cmd_phi(args, R: Report) -> None:
    G = load_group(args.group)
    p, top = args.p, args.max_degree
    if not G.is_p_group(p):
        cert = non_pgroup_vanishing_certificate(G)
        R.comment(f"{G.name} is not a {p}-group; geometric fixed points are not assembled")
        R.add("certificate", cert)
        R.check(math.gcd(cert, p) == 1, f"gcd certificate is a unit mod {p}")
        return
    phi = br.phi_coefficients(G, p, top)
    R.add("degree", "dim")
    for k in range(0, top + 1):
        R.add(k, phi[k])
    # independent side: Poincare series of the Frattini quotient's rank
    Q = quotient(G, frattini_subgroup(G, p)).group
    r = round(np.log(Q.order) / np.log(p)) if Q.order > 1 else 0
    if r >= 1:
        series = rings.poincare_mod_p(p, r, top).coefficients
        R.check(phi.as_list(0, top) == series,
                f"matches the Poincare series for (Z/{p})^{r} = G/Frattini")


def cmd_hilbert(args, R: Report) -> None:
    p, n, top = args.p, args.n, args.max_degree
    form = "integral" if args.form == "integral" else "modp"
    P = rings.presentation(p, n, form)
    series = (rings.poincare_integral(p, n, top) if form == "integral"
              else rings.poincare_mod_p(p, n, top))
    R.comment(f"{len(P.gens)} generators, {len(P.relations)} relations; series {series.factored}")
    R.add("degree", "presentation-dim", "series-coeff", "model-rank")
    ok = True
    for d in range(top + 1):
        g = rings.graded_dim(P, d)
        mr = rings.model_rank(P, d) if form == "modp" else rings.integral_image_rank(p, n, d)
        R.add(d, g, series.coefficients[d], mr)
        ok &= g == series.coefficients[d] == mr
    R.check(ok, "presentation dims = series coefficients = model ranks")
    if args.verify_model:
        images = rings.generator_images(P)
        R.check(all(rings.evaluate_in_model(P, r, images).is_zero() for r in P.relations),
                "every relation vanishes in the model")
        if form == "integral":
            R.check(all(rings.model_bockstein(x).is_zero() for x in images),
                    "integral generators lie in ker beta")
    if args.verify_bockstein:
        b = rings.bockstein_homology_check(p, n, top)
        for note in b.notes:
            R.comment(note)
        R.check(b.passed, b.name)
        i = rings.integral_presentation_check(p, n, top)
        R.check(i.passed, i.name)


def cmd_extraspecial(args, R: Report) -> None:
    n = args.n
    any_flag = args.counts or args.poset_homology or args.tits or args.recursion \
        or args.final_theorem or args.weyl
    if args.counts or not any_flag:
        R.comment("q-isotropic subspaces")
        R.add("k", "enumerated", "printed-formula")
        for k, e, printed in ex.isotropic_counts(n):
            R.add(k, e, printed)
            if e != printed:
                R.comment(f"k={k}: printed formula differs from the enumeration")
        E = ex.build_extraspecial(n)
        R.check(ex.check_quadratic_space(E.space), "q and b satisfy the quadratic space axioms")
        R.check(ex.check_extraspecial(E), "squares give q, commutators give b, center of order 2")
    if args.poset_homology:
        if n >= 3 and not args.deep:
            raise PreconditionError("n = 3 poset homology runs only with --deep")
        h = ex.decorated_homology(n, with_module=False)
        R.comment(f"decorated poset: simplex counts {h.counts}")
        R.add("degree", "dim")
        for k in range(0, n):
            R.add(k, h.dims[k])
        R.check(h.concentrated, f"reduced homology concentrated in degree {n - 1}")
        R.check(h.dims[n - 1] == ex.dimension_recursion(n), "top dimension equals the recursion")
        P = ex.decorated_poset(n)
        R.check(ex.lifts_conjugate(P), "all decorations of a subspace are conjugate")
    if args.tits:
        h = ex.tits_building_homology(n)
        R.comment(f"undecorated poset: simplex counts {h.counts}")
        R.add("degree", "dim")
        for k in range(0, n):
            R.add(k, h.dims[k])
        R.check(h.concentrated and h.dims[n - 1] == 2 ** (n * (n - 1)),
                f"concentrated in degree {n - 1} with rank 2^(n(n-1))")
    if args.recursion:
        R.add("m", "h_m")
        for m in range(0, n + 1):
            R.add(m, ex.dimension_recursion(m))
    if args.weyl:
        R.add("k", "weyl-order", "expected")
        rows = ex.weyl_order_check(n)
        for row in rows:
            R.add(*row)
        R.check(all(a == b for _, a, b in rows), "Weyl group orders are 2^(2(n-k)+1)")
    if args.final_theorem:
        top = args.max_degree
        rhs = ex.final_theorem_rhs(n, top)
        if n == 1:
            N = min(max(3, top), MAX_JOIN)
            lhs = ex.final_theorem_lhs_oracle(1, N, min(top, N))
            R.comment(f"join oracle uses N = {N}; it is exact in degrees <= N")
            R.add("degree", "assembly", "join-oracle")
            for k in range(0, top + 1):
                R.add(k, rhs[k], lhs[k] if k <= N else "-")
            R.check(rhs.as_list(0, min(top, N)) == lhs.as_list(0, min(top, N)),
                    f"assembly equals the join oracle in degrees <= {min(top, N)}")
        else:
            R.add("degree", "assembly")
            for k in range(0, top + 1):
                R.add(k, rhs[k])


def cmd_verify_all(args, R: Report) -> None:
    only = set(args.only or verify.CRITERIA)
    for k, fn in verify.CRITERIA.items():
        if k not in only:
            continue
        if k in (1, 12):
            c = fn(args.seed)
        elif k == 9:
            c = fn(not args.no_deep)
        else:
            c = fn()
        R.rows.append(c.line(args.timings))
        if args.verbose:
            R.rows.extend(f"#\t{d}" for d in c.details)
        R.check(c.passed, f"criterion {k}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="equihom", description=__doc__.splitlines()[0])
    ap.add_argument("--output", "-o", help="write output to this file (atomically)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", help="group summary, subgroups, certificate")
    g.add_argument("--group", required=True, help="group file or builtin, e.g. dihedral-8")
    g.add_argument("--subgroups", action="store_true", help="list subgroup classes")

    p = sub.add_parser("poset", help="order complex and reduced homology of a poset")
    p.add_argument("--group", help="group file or builtin")
    p.add_argument("--family", default="proper")
    p.add_argument("--above", type=int, default=0, help="index of the subgroup class H for P_H")
    p.add_argument("--file", help="poset text file")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--export", action="store_true", help="print the order complex simplices")

    b = sub.add_parser("bredon", help="Bredon homology of a G-complex")
    b.add_argument("--group", required=True)
    b.add_argument("--complex", required=True, help="complex file or fixture name")
    b.add_argument("--coeff", default="z2", help="z, z2, z3, z4, ...")
    b.add_argument("--route", choices=["direct", "collapse", "both"], default="direct")
    b.add_argument("--max-degree", type=int)
    b.add_argument("--cohomology", action="store_true")

    e = sub.add_parser("e1", help="E1 term of the isotropy spectral sequence")
    e.add_argument("--group", required=True)
    e.add_argument("--family", default="proper")
    e.add_argument("--p", type=int, default=2)
    e.add_argument("--max-degree", type=int, default=4)
    e.add_argument("--flavor", choices=["nerve", "strata", "based"], default="nerve")
    e.add_argument("--complex", help="complex for the strata and based flavors")

    f = sub.add_parser("phi", help="geometric fixed point coefficients")
    f.add_argument("--group", required=True)
    f.add_argument("--p", type=int, default=2)
    f.add_argument("--max-degree", type=int, default=4)

    h = sub.add_parser("hilbert", help="graded dimensions of the presented rings")
    h.add_argument("--p", type=int, required=True)
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--form", choices=["modp", "integral"], default="modp")
    h.add_argument("--max-degree", type=int, default=6)
    h.add_argument("--verify-model", action="store_true")
    h.add_argument("--verify-bockstein", action="store_true")

    x = sub.add_parser("extraspecial", help="the split extraspecial 2-group example")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--counts", action="store_true")
    x.add_argument("--poset-homology", action="store_true")
    x.add_argument("--tits", action="store_true")
    x.add_argument("--recursion", action="store_true")
    x.add_argument("--weyl", action="store_true")
    x.add_argument("--final-theorem", action="store_true")
    x.add_argument("--max-degree", type=int, default=3)
    x.add_argument("--deep", action="store_true", help="allow n = 3 poset homology")

    v = sub.add_parser("verify-all", help="run the acceptance criteria")
    v.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    v.add_argument("--only", type=int, nargs="*")
    v.add_argument("--no-deep", action="store_true", help="skip the n = 3 decorated poset")
    v.add_argument("--timings", action="store_true")
    v.add_argument("--verbose", "-v", action="store_true")
    return ap


COMMANDS = {"group": cmd_group, "poset": cmd_poset, "bredon": cmd_bredon, "e1": cmd_e1,
            "phi": cmd_phi, "hilbert": cmd_hilbert, "extraspecial": cmd_extraspecial,
            "verify-all": cmd_verify_all}


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".equihom-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("max_degree",):
        if getattr(args, name, None) is not None and getattr(args, name) < 0:
            print("error: degree bound must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
    if getattr(args, "p", None) is not None:
        if not is_prime(args.p):
            print(f"error: {args.p} is not prime", file=sys.stderr)
            return EXIT_USAGE
    R = Report()
    try:
        COMMANDS[args.command](args, R)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, PreconditionError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EquihomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(R.text(), args.output)
    return EXIT_OK if R.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
