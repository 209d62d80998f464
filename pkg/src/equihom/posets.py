"""Finite posets with a group action and their order complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from . import caps
from .chains import ChainComplex, GradedDims, GroupModule, SignedAction, homology_fp
from .errors import ParseError, PreconditionError
from .groups import Family, FiniteGroup, Subgroup, normalizer, weyl_group


class GPoset:
    """A finite poset on ``0..n-1``, optionally with a group acting.

    ``leq[i, j]`` is True when i <= j.  ``perms[g]`` is the permutation by
    which group element g acts; it must be a poset automorphism, and
    ``g -> perms[g]`` must be a homomorphism.
    """

    def __init__(self, leq, group: FiniteGroup | None = None, perms=None,
                 labels: Sequence | None = None, check: bool = True):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0] if leq.ndim == 2 else 0
        caps.check("MAX_POSET_SIZE", caps.poset_cap(), n)
        self.n = n
        self.leq = leq.reshape(n, n)
        self.group = group
        self.perms = None if perms is None else np.asarray(perms, dtype=np.int64).reshape(len(perms), n)
        self.labels = list(labels) if labels is not None else list(range(n))
        if check:
            self.validate()

    def validate(self) -> None:
        L = self.leq
        n = self.n
        if n:
            if not L.diagonal().all():
                raise PreconditionError("relation is not reflexive")
            both = L & L.T
            np.fill_diagonal(both, False)
            if both.any():
                i, j = np.argwhere(both)[0]
                raise PreconditionError(f"relation is not antisymmetric at ({i}, {j})")
            Li = L.astype(np.int64)
            if ((Li @ Li > 0) & ~L).any():
                i, j = np.argwhere((Li @ Li > 0) & ~L)[0]
                raise PreconditionError(f"relation is not transitive at ({i}, {j})")
        if self.perms is not None:
            G = self.group
            if G is None or self.perms.shape[0] != G.order:
                raise PreconditionError("action needs one permutation per group element")
            for g, pi in enumerate(self.perms):
                if sorted(pi.tolist()) != list(range(n)):
                    raise PreconditionError(f"action of {g} is not a permutation")
                if n and not np.array_equal(L[np.ix_(pi, pi)], L):
                    raise PreconditionError(f"element {g} does not act by automorphisms")
            for a in range(G.order):
                for b in range(G.order):
                    if not np.array_equal(self.perms[a][self.perms[b]],
                                          self.perms[int(G.mult[a, b])]):
                        raise PreconditionError("action is not a homomorphism")

    def lt(self) -> np.ndarray:
        L = self.leq.copy()
        np.fill_diagonal(L, False)
        return L

    def subposet(self, keep: Sequence[int]) -> "GPoset":
        keep = list(keep)
        pos = {v: i for i, v in enumerate(keep)}
        perms = None
        if self.perms is not None:
            kept = set(keep)
            perms = []
            for pi in self.perms:
                if any(int(pi[v]) not in kept for v in keep):
                    perms = None
                    break
                perms.append([pos[int(pi[v])] for v in keep])
        return GPoset(self.leq[np.ix_(keep, keep)], self.group if perms is not None else None,
                      perms, [self.labels[v] for v in keep], check=False)

    def __repr__(self) -> str:
        return f"GPoset(n={self.n})"


def chain_poset(n: int) -> GPoset:
    return GPoset(np.triu(np.ones((n, n), dtype=bool)))


def antichain(n: int) -> GPoset:
    return GPoset(np.eye(n, dtype=bool))


def subgroup_poset_above(G: FiniteGroup, F: Family, H: Subgroup) -> GPoset:
    """P_H = {K in F : K strictly contains H}, ordered by inclusion.

    The action is conjugation by N(H); it is recorded through the Weyl
    group W(H) = N(H)/H, using the least element of each coset.
    """
    if H not in F:
        raise PreconditionError(f"{H!r} is not in the family")
    elems = [K for K in F if H < K]
    n = len(elems)
    leq = np.array([[a <= b for b in elems] for a in elems], dtype=bool).reshape(n, n)
    Q = weyl_group(G, H)
    index = {K.mask: i for i, K in enumerate(elems)}
    perms = np.empty((Q.group.order, n), dtype=np.int64)
    for w, g in enumerate(Q.lifts):
        for i, K in enumerate(elems):
            perms[w, i] = index[K.conjugate(g).mask]
    P = GPoset(leq, Q.group, perms, elems, check=False)
    P.weyl = Q
    return P


# ---------------------------------------------------------------------------
# order complexes


@dataclass
class OrderComplex:
    """Strict chains of a poset, grouped by dimension.

    ``simplices[k]`` lists the k-simplices as increasing vertex tuples,
    sorted lexicographically.  ``perms[k][g, i]`` is the index of g applied
    to simplex i (present when the poset carries an action).
    """

    poset: GPoset
    simplices: dict[int, list[tuple[int, ...]]]
    perms: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return max((k for k, v in self.simplices.items() if v), default=-1)

    def counts(self) -> list[int]:
        return [len(self.simplices[k]) for k in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(v) for k, v in self.simplices.items())

    def export(self) -> str:
        lines = []
        for k in sorted(self.simplices):
            for s in self.simplices[k]:
                lines.append("simplex " + " ".join(map(str, s)))
        return "\n".join(lines) + ("\n" if lines else "")


def order_complex(P: GPoset) -> OrderComplex:
    """Order complex of P: k-simplices are strict chains x_0 < ... < x_k.

    Vertices inside a chain are listed in poset order.
    """
    lt = P.lt()
    up = [np.flatnonzero(lt[i]).tolist() for i in range(P.n)]
    simplices: dict[int, list[tuple[int, ...]]] = {0: [(i,) for i in range(P.n)]}
    cap = caps.cell_cap()
    total = P.n
    k = 0
    cur = simplices[0]
    while cur:
        nxt = []
        for s in cur:
            for y in up[s[-1]]:
                nxt.append(s + (y,))
        total += len(nxt)
        caps.check("MAX_CELLS", cap, total)
        if not nxt:
            break
        k += 1
        nxt.sort()
        simplices[k] = nxt
        cur = nxt
    if P.n == 0:
        simplices = {}
    K = OrderComplex(P, simplices)
    if P.perms is not None:
        for d, simp in simplices.items():
            index = {s: i for i, s in enumerate(simp)}
            arr = np.asarray(simp, dtype=np.int64).reshape(len(simp), d + 1)
            M = np.empty((P.perms.shape[0], len(simp)), dtype=np.int64)
            for g, pi in enumerate(P.perms):
                img = pi[arr]
                # automorphisms preserve the order, and so the vertex order along a chain
                M[g] = [index[tuple(r)] for r in img.tolist()]
            K.perms[d] = M
    return K


def count_chains(P: GPoset) -> list[int]:
    """Number of strict (k+1)-chains for each k, by dynamic programming."""
    lt = P.lt().astype(object)
    if P.n == 0:
        return []
    f = np.ones(P.n, dtype=object)       # chains starting at x of current length
    out = [int(f.sum())]
    while True:
        f = lt.dot(f)
        s = int(sum(f))
        if s == 0:
            break
        out.append(s)
    return out


def reduced_chain_complex(K: OrderComplex, p: int = 2, augmented: bool = True
                          ) -> ChainComplex:
    """Simplicial chains of K, augmented by a rank-one degree -1 term.

    With the augmentation the empty complex has homology of rank 1 in degree
    -1.  Boundary signs are (-1)^i for deleting the i-th vertex; over F_2 the
    signs are irrelevant.
    """
    dims = {k: len(v) for k, v in K.simplices.items()}
    d = {}
    for k in sorted(K.simplices):
        if k == 0:
            continue
        faces = {s: i for i, s in enumerate(K.simplices[k - 1])}
        rows, cols, vals = [], [], []
        for j, s in enumerate(K.simplices[k]):
            for i in range(k + 1):
                rows.append(faces[s[:i] + s[i + 1:]])
                cols.append(j)
                vals.append(-1 if i % 2 else 1)
        d[k] = sp.csr_matrix((vals, (rows, cols)), shape=(dims[k - 1], dims[k]), dtype=np.int64)
    if augmented:
        dims[-1] = 1
        d[0] = sp.csr_matrix(np.ones((1, dims.get(0, 0)), dtype=np.int64))
    return ChainComplex(dims, d, p=p)


def chain_action(K: OrderComplex, augmented: bool = True) -> dict[int, SignedAction]:
    out = {}
    for k, M in K.perms.items():
        out[k] = SignedAction(M, np.ones_like(M))
    if augmented and K.perms:
        g = next(iter(K.perms.values())).shape[0]
        out[-1] = SignedAction(np.zeros((g, 1), dtype=np.int64), np.ones((g, 1), dtype=np.int64))
    return out


def chain_modules(K: OrderComplex, p: int, augmented: bool = True) -> dict[int, GroupModule]:
    G = K.poset.group
    dims = {k: len(v) for k, v in K.simplices.items()}
    if augmented:
        dims[-1] = 1
    acts = chain_action(K, augmented)
    out = {}
    for k, n in dims.items():
        if k in acts:
            out[k] = acts[k].module(G, p)
        else:
            out[k] = GroupModule.from_permutations(G, p, np.tile(np.arange(n), (G.order, 1)))
    return out


def reduced_homology(P: GPoset, p: int = 2) -> GradedDims:
    """Reduced homology of the nerve |P| (degree -1 is rank 1 iff P is empty)."""
    C = reduced_chain_complex(order_complex(P), p)
    return homology_fp(C, p, range(-1, max(C.degrees, default=-1) + 1))


def closure_retract(P: GPoset, f: Sequence[int] | Callable[[int], int]) -> GPoset:
    """Image of a monotone, inflationary (or deflationary) self-map of P.

    The inclusion of the image is a homotopy equivalence of nerves.  Both
    hypotheses are checked; a violation raises with the failing pair.
    """
    fm = [int(f(i)) for i in range(P.n)] if callable(f) else [int(x) for x in f]
    if len(fm) != P.n or any(not 0 <= y < P.n for y in fm):
        raise PreconditionError("map must send every element of P into P")
    L = P.leq
    for x in range(P.n):
        for y in range(P.n):
            if L[x, y] and not L[fm[x], fm[y]]:
                raise PreconditionError(f"map is not monotone: {x} <= {y} but f({x}) !<= f({y})")
    infl = all(L[x, fm[x]] for x in range(P.n))
    defl = all(L[fm[x], x] for x in range(P.n))
    if not (infl or defl):
        bad_i = next(x for x in range(P.n) if not L[x, fm[x]])
        bad_d = next(x for x in range(P.n) if not L[fm[x], x])
        raise PreconditionError(
            f"map is neither inflationary (fails at {bad_i}) nor deflationary (fails at {bad_d})")
    image = sorted(set(fm))
    return P.subposet(image)


# ---------------------------------------------------------------------------
# text format


def parse_poset_text(text: str, group: FiniteGroup | None = None) -> GPoset:
    """``poset n``, then ``le i j`` lines and optional ``act g perm...`` lines.

    The order is the reflexive-transitive closure of the ``le`` pairs.
    """
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty poset file")
    no, head = lines[0]
    tok = head.split()
    if tok[0] != "poset" or len(tok) != 2:
        raise ParseError("expected 'poset <n>'", no, tok[0])
    try:
        n = int(tok[1])
    except ValueError:
        raise ParseError("poset size must be an integer", no, tok[1]) from None
    caps.check("MAX_POSET_SIZE", caps.poset_cap(), n)
    leq = np.eye(n, dtype=bool)
    acts: dict[int, list[int]] = {}
    for no, ln in lines[1:]:
        t = ln.split()
        try:
            vals = [int(x) for x in t[1:]]
        except ValueError:
            bad = next(x for x in t[1:] if not x.lstrip("-").isdigit())
            raise ParseError("non-integer token", no, bad) from None
        if t[0] == "le":
            if len(vals) != 2 or not all(0 <= v < n for v in vals):
                raise ParseError("'le' takes two element indices", no)
            leq[vals[0], vals[1]] = True
        elif t[0] == "act":
            if len(vals) != n + 1:
                raise ParseError(f"'act' takes a group element and {n} images", no)
            acts[vals[0]] = vals[1:]
        else:
            raise ParseError("unknown directive", no, t[0])
    # transitive closure
    for k in range(n):
        leq |= leq[:, [k]] & leq[[k], :]
    perms = None
    if acts:
        if group is None:
            raise ParseError("'act' lines need a group")
        missing = [g for g in range(group.order) if g not in acts]
        if missing:
            raise ParseError(f"no action given for group element {missing[0]}")
        perms = [acts[g] for g in range(group.order)]
    return GPoset(leq, group, perms)


def format_poset_text(P: GPoset) -> str:
    out = [f"poset {P.n}"]
    lt = P.lt()
    # cover relations suffice
    for i in range(P.n):
        for j in np.flatnonzero(lt[i]):
            j = int(j)
            if not any(lt[i, k] and lt[k, j] for k in range(P.n)):
                out.append(f"le {i} {j}")
    if P.perms is not None:
        for g, pi in enumerate(P.perms):
            out.append(f"act {g} " + " ".join(map(str, pi.tolist())))
    return "\n".join(out) + "\n"
