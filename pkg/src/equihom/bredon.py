"""Bredon homology of finite G-simplicial complexes with constant coefficients.

A :class:`GComplex` is a simplicial complex with a simplicial action given
by vertex permutations.  Complexes are kept *rigid*: whatever fixes a
simplex fixes it vertexwise, so every fixed set X^H is a subcomplex and the
stabilizer of a simplex is its isotropy group.  Non-rigid input is
barycentrically subdivided once.

Two independent routes compute Bredon homology:

* :func:`bredon_homology_direct` builds C^G(X) (x)_O A literally, as a
  quotient of the sum over conjugacy-class representatives H of C(X^H) (x) A
  by the relations coming from every orbit-category morphism G/H -> G/K.
* :func:`bredon_homology_collapse` sums, over the isotropy strata, the
  homology of the coinvariants of the free Weyl-group action on the relative
  chains.  It is valid for p-groups with F_p coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from . import caps
from . import linalg as la
from .chains import (ChainComplex, GradedDims, GroupModule, SignedAction, borel_hyperhomology,
                     coinvariants_free, homology_fp, homology_z)
from .errors import ConsistencyError, DomainError, ParseError, PreconditionError
from .groups import (Family, FiniteGroup, Subgroup, all_subgroups, conjugacy_classes_of_subgroups,
                     is_prime, non_pgroup_vanishing_certificate, normalizer, proper_family,
                     weyl_group)
from .posets import chain_modules, order_complex, reduced_chain_complex, subgroup_poset_above


def _perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


class GComplex:
    """A finite simplicial complex with a simplicial G-action.

    ``simplices`` may list any generating set of simplices; the complex is
    their downward closure.  ``perms[g, v]`` is the image of vertex v under
    group element g.  Construction checks that the action is a homomorphism
    preserving simplices, then enforces rigidity (``subdivide=True`` repairs
    a non-rigid action by barycentric subdivision).
    """

    def __init__(self, group: FiniteGroup, n_vertices: int, simplices: Iterable[Sequence[int]],
                 perms, labels: Sequence | None = None, subdivide: bool = True,
                 check: bool = True):
        self.group = group
        self.n = int(n_vertices)
        self.perms = np.asarray(perms, dtype=np.int64).reshape(group.order, self.n)
        self.labels = list(labels) if labels is not None else list(range(self.n))
        faces: set[tuple[int, ...]] = {(v,) for v in range(self.n)}
        for s in simplices:
            s = tuple(sorted(set(int(v) for v in s)))
            if not s:
                continue
            if any(not 0 <= v < self.n for v in s):
                raise PreconditionError(f"simplex {s} uses an unknown vertex")
            for r in range(1, len(s) + 1):
                faces.update(itertools.combinations(s, r))
            caps.check("MAX_CELLS", caps.cell_cap(), len(faces))
        by_dim: dict[int, list[tuple[int, ...]]] = {}
        for s in faces:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self.simplices = {k: sorted(v) for k, v in sorted(by_dim.items())}
        if self.n == 0:
            self.simplices = {}
        self.index = {k: {s: i for i, s in enumerate(v)} for k, v in self.simplices.items()}
        if check:
            self._validate()
        self.rigid = self._is_rigid()
        self.subdivided = False
        if not self.rigid:
            if not subdivide:
                raise PreconditionError("action is not rigid")
            sd = barycentric_subdivision(self)
            self.__dict__.update(sd.__dict__)
            self.subdivided = True

    # -- structure -------------------------------------------------------

    def _validate(self) -> None:
        G = self.group
        for g in range(G.order):
            pi = self.perms[g]
            if sorted(pi.tolist()) != list(range(self.n)):
                raise PreconditionError(f"element {g} does not permute the vertices")
        for a in range(G.order):
            for b in range(G.order):
                if not np.array_equal(self.perms[a][self.perms[b]], self.perms[int(G.mult[a, b])]):
                    raise PreconditionError("vertex action is not a homomorphism")
        for k, simp in self.simplices.items():
            idx = self.index[k]
            for g in range(G.order):
                pi = self.perms[g]
                for s in simp:
                    if tuple(sorted(int(pi[v]) for v in s)) not in idx:
                        raise PreconditionError(f"element {g} does not map simplex {s} to a simplex")

    def _is_rigid(self) -> bool:
        for k, simp in self.simplices.items():
            if k == 0:
                continue
            for g in range(self.group.order):
                pi = self.perms[g]
                for s in simp:
                    img = [int(pi[v]) for v in s]
                    if sorted(img) == list(s) and img != list(s):
                        return False
        return True

    @property
    def dimension(self) -> int:
        return max(self.simplices, default=-1)

    def counts(self) -> list[int]:
        return [len(self.simplices.get(k, ())) for k in range(self.dimension + 1)]

    def n_cells(self) -> int:
        return sum(len(v) for v in self.simplices.values())

    def simplex_action(self, k: int) -> SignedAction:
        """Signed permutation action of G on the oriented k-simplices."""
        simp = self.simplices.get(k, [])
        idx = self.index.get(k, {})
        G = self.group
        perm = np.empty((G.order, len(simp)), dtype=np.int64)
        sign = np.ones((G.order, len(simp)), dtype=np.int64)
        for g in range(G.order):
            pi = self.perms[g]
            for i, s in enumerate(simp):
                img = [int(pi[v]) for v in s]
                perm[g, i] = idx[tuple(sorted(img))]
                sign[g, i] = _perm_sign(img)
        return SignedAction(perm, sign)

    def isotropy_masks(self, k: int) -> list[int]:
        """Stabilizer bitmask of every k-simplex (vertexwise = setwise)."""
        G = self.group
        vstab = [0] * self.n
        for g in range(G.order):
            pi = self.perms[g]
            for v in range(self.n):
                if pi[v] == v:
                    vstab[v] |= 1 << g
        out = []
        for s in self.simplices.get(k, []):
            m = (1 << G.order) - 1
            for v in s:
                m &= vstab[v]
            out.append(m)
        return out

    def chain_complex(self, p: int = 2) -> ChainComplex:
        return simplicial_chains(self.simplices, self.index, p)

    def __repr__(self) -> str:
        return f"GComplex({self.group!r}, counts={self.counts()})"


def simplicial_chains(simplices: dict[int, list[tuple[int, ...]]],
                      index: dict[int, dict[tuple[int, ...], int]], p: int,
                      keep: dict[int, Sequence[int]] | None = None) -> ChainComplex:
    """Oriented simplicial chains, optionally restricted to the cells ``keep``.

    Restricting to a set of cells closed under "is a coface" (the complement
    of a subcomplex) yields relative chains; faces outside ``keep`` drop.
    """
    dims, d = {}, {}
    sel = {k: (list(range(len(v))) if keep is None else list(keep.get(k, [])))
           for k, v in simplices.items()}
    pos = {k: {i: j for j, i in enumerate(v)} for k, v in sel.items()}
    for k in simplices:
        dims[k] = len(sel[k])
    for k in simplices:
        if k == 0 or not dims[k]:
            continue
        rows, cols, vals = [], [], []
        fidx = index[k - 1]
        for j, i in enumerate(sel[k]):
            s = simplices[k][i]
            for t in range(k + 1):
                f = fidx[s[:t] + s[t + 1:]]
                r = pos[k - 1].get(f)
                if r is not None:
                    rows.append(r)
                    cols.append(j)
                    vals.append(-1 if t % 2 else 1)
        d[k] = sp.csr_matrix((vals, (rows, cols)), shape=(dims[k - 1], dims[k]), dtype=np.int64)
    return ChainComplex(dims, d, p=p)


def barycentric_subdivision(X: GComplex) -> GComplex:
    """Barycentric subdivision; the induced action is always rigid."""
    cells = [s for k in sorted(X.simplices) for s in X.simplices[k]]
    index = {s: i for i, s in enumerate(cells)}
    G = X.group
    perms = np.empty((G.order, len(cells)), dtype=np.int64)
    for g in range(G.order):
        pi = X.perms[g]
        for i, s in enumerate(cells):
            perms[g, i] = index[tuple(sorted(int(pi[v]) for v in s))]
    maximal = []
    subsets = {s: [index[f] for r in range(1, len(s) + 1)
                   for f in itertools.combinations(s, r)] for s in cells}
    # flags: maximal chains of faces; generated from the top cells
    top_cells = [s for s in cells if not any(set(s) < set(t) for t in cells if len(t) == len(s) + 1)]
    for s in top_cells:
        for order in itertools.permutations(s):
            chain = [index[tuple(sorted(order[:r]))] for r in range(1, len(order) + 1)]
            maximal.append(chain)
    labels = [X.labels[s[0]] if len(s) == 1 else tuple(X.labels[v] for v in s) for s in cells]
    return GComplex(G, len(cells), maximal, perms, labels, subdivide=False)


# ---------------------------------------------------------------------------
# constructions


def point(G: FiniteGroup) -> GComplex:
    return GComplex(G, 1, [(0,)], np.zeros((G.order, 1), dtype=np.int64), ["*"])


def empty_complex(G: FiniteGroup) -> GComplex:
    return GComplex(G, 0, [], np.zeros((G.order, 0), dtype=np.int64))


def orbit(G: FiniteGroup, H: Subgroup | None = None) -> GComplex:
    """The discrete G-set G/H (G/e, the free orbit, by default)."""
    H = G.trivial if H is None else H
    cosets: list[int] = []
    index = {}
    lookup = {}
    for g in range(G.order):
        coset = frozenset(int(G.mult[g, h]) for h in H)
        if coset not in index:
            index[coset] = len(cosets)
            cosets.append(g)
        lookup[g] = index[coset]
    m = len(cosets)
    perms = np.empty((G.order, m), dtype=np.int64)
    for a in range(G.order):
        for i, g in enumerate(cosets):
            perms[a, i] = lookup[int(G.mult[a, g])]
    return GComplex(G, m, [(i,) for i in range(m)], perms, [f"{G.labels[g]}H" for g in cosets])


def trivial_sphere0(G: FiniteGroup) -> GComplex:
    """Two G-fixed points."""
    return GComplex(G, 2, [(0,), (1,)], np.tile([0, 1], (G.order, 1)), ["N", "S"])


def join(X: GComplex, Y: GComplex) -> GComplex:
    """Simplicial join with the diagonal action (rigid if both factors are)."""
    if X.group is not Y.group and not np.array_equal(X.group.mult, Y.group.mult):
        raise PreconditionError("join needs the same group on both factors")
    G = X.group
    n = X.n + Y.n
    perms = np.hstack([X.perms, Y.perms + X.n])
    xs = [()] + [s for k in X.simplices for s in X.simplices[k]]
    ys = [()] + [tuple(v + X.n for v in s) for k in Y.simplices for s in Y.simplices[k]]
    caps.check("MAX_CELLS", caps.cell_cap(), len(xs) * len(ys))
    xtop = _maximal(X)
    ytop = [tuple(v + X.n for v in s) for s in _maximal(Y)]
    gens = [a + b for a in (xtop or [()]) for b in (ytop or [()])]
    labels = [("x", l) for l in X.labels] + [("y", l) for l in Y.labels]
    return GComplex(G, n, gens, perms, labels, subdivide=False)


def _maximal(X: GComplex) -> list[tuple[int, ...]]:
    out = []
    for k, simp in X.simplices.items():
        higher = X.simplices.get(k + 1, [])
        covered = set()
        for t in higher:
            for i in range(len(t)):
                covered.add(t[:i] + t[i + 1:])
        out.extend(s for s in simp if s not in covered)
    return out


def suspension(X: GComplex) -> GComplex:
    """Unreduced suspension: join with two fixed points."""
    return join(X, trivial_sphere0(X.group))


def cone(X: GComplex) -> GComplex:
    return join(X, point(X.group))


def sign_sphere(G: FiniteGroup, kernel: Subgroup) -> GComplex:
    """S(alpha) for the character with the given index-2 kernel: two points
    swapped by every element outside the kernel."""
    if G.order != 2 * kernel.order:
        raise PreconditionError("kernel of a sign character must have index 2")
    perms = np.array([[0, 1] if g in kernel else [1, 0] for g in range(G.order)])
    return GComplex(G, 2, [(0,), (1,)], perms, ["a", "b"])


def s_alpha(G: FiniteGroup | None = None, kernel: Subgroup | None = None) -> GComplex:
    """One-point compactification S^alpha of a sign representation.

    The circle with the two fixed points N, S and the swapped points a, b,
    i.e. the unreduced suspension of S(alpha).  Defaults to G = Z/2.
    """
    from .groups import cyclic
    if G is None:
        G = cyclic(2)
    if kernel is None:
        if G.order != 2:
            raise PreconditionError("pass the kernel for groups other than Z/2")
        kernel = G.trivial
    return suspension(sign_sphere(G, kernel))


def orthogonal_action(G: FiniteGroup, gens: Sequence[int], matrices: Sequence) -> list[np.ndarray]:
    """Extend 2x2 integer-rounded orthogonal generator images to all of G."""
    mats: list = [None] * G.order
    mats[G.identity] = np.eye(2)
    frontier = [G.identity]
    images = [np.asarray(M, dtype=float) for M in matrices]
    while frontier:
        nxt = []
        for a in frontier:
            for g, M in zip(gens, images):
                b = int(G.mult[g, a])
                N = M @ mats[a]
                if mats[b] is None:
                    mats[b] = N
                    nxt.append(b)
                elif not np.allclose(mats[b], N):
                    raise PreconditionError("matrices do not define a representation")
            frontier = nxt
    if any(M is None for M in mats):
        raise PreconditionError("generators do not generate the group")
    return mats


def polygon_circle(G: FiniteGroup, mats: Sequence[np.ndarray], m: int) -> GComplex:
    """Unit circle triangulated by the regular m-gon, with G acting through
    the given orthogonal 2x2 matrices (which must permute the vertices)."""
    pts = [np.array([np.cos(2 * np.pi * k / m), np.sin(2 * np.pi * k / m)]) for k in range(m)]
    perms = np.empty((G.order, m), dtype=np.int64)
    for g in range(G.order):
        for k in range(m):
            q = mats[g] @ pts[k]
            j = int(round(np.arctan2(q[1], q[0]) / (2 * np.pi / m))) % m
            if not np.allclose(pts[j], q, atol=1e-9):
                raise PreconditionError("matrices do not permute the polygon vertices")
            perms[g, k] = j
    edges = [(k, (k + 1) % m) for k in range(m)]
    return GComplex(G, m, edges, perms, [f"v{k}" for k in range(m)])


def dihedral_gamma_circle(G: FiniteGroup | None = None, gens: Sequence[int] | None = None,
                          matrices: Sequence | None = None) -> GComplex:
    """S(gamma) for D8 acting on the plane: the octagon with vertices at the
    angles k*pi/4.

    With no arguments G is the builtin dihedral group of order 8 with
    generators r (quarter turn) and s (reflection in the x-axis).  Any other
    presentation of D8 can be passed with generator indices and 2x2
    matrices.  Reflection axes pass through vertices, so every edge is free
    and the action is rigid.
    """
    from .groups import dihedral
    if G is None:
        G = dihedral(4)
        r = G.elements.index((1, 2, 3, 0))
        s = G.elements.index((0, 3, 2, 1))
        gens = [r, s]
        matrices = [[[0, -1], [1, 0]], [[1, 0], [0, -1]]]
    mats = orthogonal_action(G, gens, matrices)
    return polygon_circle(G, mats, 8)


def join_power_sphere(G: FiniteGroup, model: GComplex, N: int) -> GComplex:
    """N-fold join of a sphere model S(V), a finite stand-in for S(infinity V)."""
    if N < 1:
        raise PreconditionError("N must be at least 1")
    X = model
    for _ in range(N - 1):
        X = join(X, model)
    return X


def random_gcomplex(G: FiniteGroup, rng: np.random.Generator, n_orbits: int = 3,
                    n_simplices: int = 3, max_dim: int = 2) -> GComplex:
    """A random G-complex: vertex orbits G/H plus the G-saturation of random
    simplices, subdivided if the action is not rigid."""
    subs = all_subgroups(G)
    blocks, labels = [], []
    offset = 0
    perm_parts = []
    for _ in range(n_orbits):
        H = subs[int(rng.integers(0, len(subs)))]
        O = orbit(G, H)
        perm_parts.append(O.perms + offset)
        blocks.append(list(range(offset, offset + O.n)))
        offset += O.n
    perms = np.hstack(perm_parts)
    n = offset
    simp = set()
    for _ in range(n_simplices):
        k = int(rng.integers(1, max_dim + 2))
        k = min(k, n)
        s = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        for g in range(G.order):
            simp.add(tuple(sorted(int(perms[g, v]) for v in s)))
    X = GComplex(G, n, sorted(simp), perms, check=False)
    return X


# ---------------------------------------------------------------------------
# fixed points, isotropy, strata


def isotropy_subgroups(X: GComplex) -> list[Subgroup]:
    G = X.group
    masks = set()
    for k in X.simplices:
        masks.update(X.isotropy_masks(k))
    return sorted((Subgroup(G, m) for m in masks), key=Subgroup.sort_key)


def isotropy_family(X: GComplex) -> Family:
    """F_X = {H : X^H nonempty}: subgroups of vertex stabilizers."""
    G = X.group
    stabs = set(X.isotropy_masks(0))
    members = [H for H in all_subgroups(G) if any(H.mask & m == H.mask for m in stabs)]
    return Family(G, members, validate=False, name="isotropy")


def fixed_cells(X: GComplex, H: Subgroup) -> dict[int, list[int]]:
    out = {}
    for k in X.simplices:
        out[k] = [i for i, m in enumerate(X.isotropy_masks(k)) if H.mask & m == H.mask]
    return out


def fixed_subcomplex(X: GComplex, H: Subgroup) -> GComplex:
    """X^H with the residual action of W(H) = N(H)/H."""
    if not X.rigid:
        raise PreconditionError("fixed points need a rigid complex")
    Q = weyl_group(X.group, H)
    verts = fixed_cells(X, H).get(0, [])
    pos = {v: i for i, v in enumerate(verts)}
    cells = fixed_cells(X, H)
    simp = [tuple(pos[v] for v in X.simplices[k][i]) for k in cells for i in cells[k]]
    perms = np.empty((Q.group.order, len(verts)), dtype=np.int64)
    for w, g in enumerate(Q.lifts):
        for i, v in enumerate(verts):
            perms[w, i] = pos[int(X.perms[g, v])]
    Y = GComplex(Q.group, len(verts), simp, perms, [X.labels[v] for v in verts],
                 subdivide=False)
    Y.weyl = Q
    return Y


@dataclass
class StratumData:
    """Cells of isotropy exactly H: the relative complex X^H / X^{>H} with
    its free W(H)-action."""

    subgroup: Subgroup
    height: int
    weyl: object
    cells: dict[int, list[int]]
    chains: ChainComplex
    action: dict[int, SignedAction]

    def coinvariants(self, p: int) -> ChainComplex:
        return coinvariants_free(self.chains.reduce_mod(p), self.weyl.group, self.action, p)


def strata(X: GComplex, p: int = 2) -> list[StratumData]:
    """One stratum per conjugacy class of isotropy groups, ordered by the
    class representative."""
    if not X.rigid:
        raise PreconditionError("strata need a rigid complex")
    G = X.group
    F = isotropy_family(X)
    iso = {k: X.isotropy_masks(k) for k in X.simplices}
    present = {m for v in iso.values() for m in v}
    out = []
    for H, _ in conjugacy_classes_of_subgroups(G, list(F.members)):
        conj = {H.conjugate(g).mask for g in range(G.order)}
        if not conj & present:
            continue
        Q = weyl_group(G, H)
        cells = {k: [i for i, m in enumerate(iso[k]) if m == H.mask] for k in X.simplices}
        C = simplicial_chains(X.simplices, X.index, 0, keep=cells)
        action = {}
        for k, sel in cells.items():
            if not sel:
                continue
            full = X.simplex_action(k)
            pos = {i: j for j, i in enumerate(sel)}
            perm = np.empty((Q.group.order, len(sel)), dtype=np.int64)
            sign = np.empty((Q.group.order, len(sel)), dtype=np.int64)
            for w, g in enumerate(Q.lifts):
                for j, i in enumerate(sel):
                    img = int(full.perm[g, i])
                    if img not in pos:
                        raise ConsistencyError("normalizer moved a cell out of its stratum")
                    perm[w, j] = pos[img]
                    sign[w, j] = full.sign[g, i]
            for j in range(len(sel)):
                if len(set(perm[:, j].tolist())) != Q.group.order:
                    raise ConsistencyError(f"W(H) does not act freely on stratum {H!r}")
            action[k] = SignedAction(perm, sign)
        out.append(StratumData(H, F.height(H), Q, cells, C, action))
    return out


# ---------------------------------------------------------------------------
# Bredon homology: the orbit-category route


def _coset_reps(G: FiniteGroup, K: Subgroup) -> list[int]:
    seen, reps = 0, []
    for g in range(G.order):
        if seen >> g & 1:
            continue
        reps.append(g)
        for k in K:
            seen |= 1 << int(G.mult[g, k])
    return reps


def _orbit_category_data(X: GComplex):
    """Generators and two-term relations of C^G(X) (x)_O A.

    Returns the list of representative subgroups, the per-degree generator
    lists (pairs (rep index, simplex index)), and per degree the relations
    ``(a, sign, b, index)`` meaning sign * gen_a = index * gen_b.
    """
    G = X.group
    reps = [H for H, _ in conjugacy_classes_of_subgroups(G)]
    iso = {k: X.isotropy_masks(k) for k in X.simplices}
    fixed = {}
    for r, H in enumerate(reps):
        fixed[r] = {k: [i for i, m in enumerate(iso[k]) if H.mask & m == H.mask] for k in X.simplices}
    reps_live = [r for r in range(len(reps)) if fixed[r].get(0)]
    gens: dict[int, list[tuple[int, int]]] = {}
    gidx: dict[int, dict[tuple[int, int], int]] = {}
    for k in X.simplices:
        lst = [(r, i) for r in reps_live for i in fixed[r][k]]
        gens[k] = lst
        gidx[k] = {x: j for j, x in enumerate(lst)}
    actions = {k: X.simplex_action(k) for k in X.simplices}
    rels: dict[int, list[tuple[int, int, int, int]]] = {k: [] for k in X.simplices}
    for a in reps_live:
        H = reps[a]
        for b in reps_live:
            K = reps[b]
            if H.order > K.order or K.order % H.order:
                continue
            idx = K.order // H.order
            for g in _coset_reps(G, K):
                # morphism G/H -> G/K, eH -> gK, exists iff g^-1 H g <= K
                if not H.conjugate(int(G.inv[g])) <= K:
                    continue
                for k in X.simplices:
                    act = actions[k]
                    for i in fixed[b][k]:
                        j = int(act.perm[g, i])
                        s = int(act.sign[g, i])
                        rels[k].append((gidx[k][(a, j)], s, gidx[k][(b, i)], idx))
    return reps, gens, gidx, rels


def _orbit_boundaries(X: GComplex, gens, gidx):
    d = {}
    for k in X.simplices:
        if k == 0:
            continue
        rows, cols, vals = [], [], []
        fidx = X.index[k - 1]
        for j, (r, i) in enumerate(gens[k]):
            s = X.simplices[k][i]
            for t in range(k + 1):
                f = fidx[s[:t] + s[t + 1:]]
                rows.append(gidx[k - 1][(r, f)])
                cols.append(j)
                vals.append(-1 if t % 2 else 1)
        d[k] = sp.csr_matrix((vals, (rows, cols)), shape=(len(gens[k - 1]), len(gens[k])),
                             dtype=np.int64)
    return d


class _WeightedUnionFind:
    """Solves x_a = w * x_b relations over F_p; roots can be forced to 0."""

    def __init__(self, n: int, p: int):
        self.parent = list(range(n))
        self.weight = [1] * n          # x_i = weight[i] * x_parent[i]
        self.zero = [False] * n
        self.p = p

    def find(self, a: int) -> tuple[int, int]:
        path = []
        while self.parent[a] != a:
            path.append(a)
            a = self.parent[a]
        root, acc = a, 1
        for node in reversed(path):
            acc = acc * self.weight[node] % self.p
            self.weight[node] = acc
            self.parent[node] = root
        return root, 0

    def resolve(self, a: int) -> tuple[int, int]:
        self.find(a)
        if self.parent[a] == a:
            return a, 1
        return self.parent[a], self.weight[a]

    def relate(self, a: int, coeff: int, b: int) -> None:
        """Impose x_a = coeff * x_b."""
        p = self.p
        ra, wa = self.resolve(a)
        if coeff % p == 0:
            self.zero[ra] = True
            return
        rb, wb = self.resolve(b)
        # wa x_ra = coeff wb x_rb
        c = coeff * wb * pow(wa, -1, p) % p
        if ra == rb:
            if c != 1:
                self.zero[ra] = True
            return
        self.parent[ra] = rb
        self.weight[ra] = c
        self.zero[rb] = self.zero[rb] or self.zero[ra]


def _direct_fp(X: GComplex, p: int, top: int) -> GradedDims:
    reps, gens, gidx, rels = _orbit_category_data(X)
    d = _orbit_boundaries(X, gens, gidx)
    cls: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    dims = {}
    for k in X.simplices:
        uf = _WeightedUnionFind(len(gens[k]), p)
        for a, s, b, idx in rels[k]:
            # s x_a = idx x_b
            uf.relate(a, s * idx, b)
        root = np.empty(len(gens[k]), dtype=np.int64)
        w = np.empty(len(gens[k]), dtype=np.int64)
        for j in range(len(gens[k])):
            r, wt = uf.resolve(j)
            root[j], w[j] = r, wt
        live = sorted({int(r) for r in root if not uf.zero[int(r)]})
        pos = {r: i for i, r in enumerate(live)}
        col = np.array([pos.get(int(r), -1) for r in root], dtype=np.int64)
        cls[k] = (col, w, live)
        dims[k] = len(live)
    qd = {}
    for k in X.simplices:
        if k == 0:
            continue
        col0, w0, _ = cls[k - 1]
        _, _, live = cls[k]
        M = sp.csc_matrix(d[k])
        rows, cols, vals = [], [], []
        for c, r in enumerate(live):
            lo, hi = M.indptr[r], M.indptr[r + 1]
            for i, v in zip(M.indices[lo:hi], M.data[lo:hi]):
                t = int(col0[i])
                if t >= 0:
                    rows.append(t)
                    cols.append(c)
                    vals.append(int(v) * int(w0[i]) % p)
        qd[k] = sp.csr_matrix((vals, (rows, cols)), shape=(dims[k - 1], dims[k]), dtype=np.int64)
    Q = ChainComplex(dims, qd, p=p)
    return homology_fp(Q, p, range(0, top + 1))


def _integer_kernel(A: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis (columns, as lists) of the integer kernel of A."""
    if not A or not A[0]:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    U, D, V = la.smith_normal_form(A)
    r = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def _quotient_homology_z(dims, d, rels_mat, top) -> GradedDims:
    """Homology of C / R for a free Z-complex C and subcomplex lattice R.

    H_k = Zbar_k / Bbar_k with Zbar_k = {c : d c in R_{k-1}} and
    Bbar_k = d(C_{k+1}) + R_k, all inside C_k = Z^{dims[k]}.
    """
    out, tors = {}, {}
    for k in range(0, top + 1):
        n = dims.get(k, 0)
        if n == 0:
            out[k] = 0
            continue
        Rk = rels_mat.get(k, [])                           # columns
        # Zbar: kernel of [d_k | R_{k-1}] projected onto the first n coords
        if k - 1 in dims and dims[k - 1]:
            dk = d[k].toarray().tolist() if k in d else [[0] * n for _ in range(dims[k - 1])]
            Rprev = rels_mat.get(k - 1, [])
            stacked = [row + [c[i] for c in Rprev] for i, row in enumerate(dk)]
            ker = _integer_kernel(stacked, n + len(Rprev))
            Zb = [v[:n] for v in ker]
        else:
            Zb = [[int(i == j) for i in range(n)] for j in range(n)]
        # a generating set of the projection; reduce to a basis via SNF
        if not Zb:
            out[k] = 0
            continue
        Zmat = [[v[i] for v in Zb] for i in range(n)]      # n x m
        U, D, V, Ui = la.smith_decomposition(Zmat)
        rank = sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i])
        # basis of the lattice: columns of Ui * D[:, :rank]
        basis = [[Ui[i][j] * D[j][j] for i in range(n)] for j in range(rank)]
        Bgen = []
        if k + 1 in d and dims.get(k + 1):
            dn = d[k + 1].toarray()
            Bgen += [dn[:, j].tolist() for j in range(dn.shape[1])]
        Bgen += [list(c) for c in Rk]
        # coordinates of Bgen in the basis: U b has entries D_jj * x_j
        coords = []
        for b in Bgen:
            ub = [sum(U[i][t] * b[t] for t in range(n)) for i in range(n)]
            x = []
            for j in range(rank):
                if ub[j] % D[j][j]:
                    raise ConsistencyError("boundary not inside the cycle lattice")
                x.append(ub[j] // D[j][j])
            if any(ub[j] for j in range(rank, n)):
                raise ConsistencyError("boundary not inside the cycle lattice")
            coords.append(x)
        if coords and rank:
            M = [[coords[c][j] for c in range(len(coords))] for j in range(rank)]
            inv = la.invariant_factors(M)
        else:
            inv = []
        out[k] = rank - len(inv)
        t = tuple(f for f in inv if f > 1)
        if t:
            tors[k] = t
    return GradedDims(out, tors, ring=0)


def _direct_lattice(X: GComplex, m: int, top: int) -> GradedDims:
    reps, gens, gidx, rels = _orbit_category_data(X)
    d = _orbit_boundaries(X, gens, gidx)
    dims = {k: len(v) for k, v in gens.items()}
    for k, n in dims.items():
        caps.check("MAX_SNF_SIZE", caps.MAX_SNF_SIZE, n)
    rels_mat: dict[int, list[list[int]]] = {}
    for k in X.simplices:
        cols = set()
        n = dims[k]
        for a, s, b, idx in rels[k]:
            v = [0] * n
            v[a] += s
            v[b] -= idx
            if any(v):
                cols.add(tuple(v))
        if m:
            for i in range(n):
                v = [0] * n
                v[i] = m
                cols.add(tuple(v))
        rels_mat[k] = [list(c) for c in sorted(cols)]
    H = _quotient_homology_z(dims, d, rels_mat, top)
    H.ring = m
    return H


def parse_coefficients(coeff) -> int:
    """'z' -> 0, 'z2' / 'z/2' / 2 -> 2, 'z4' -> 4."""
    if isinstance(coeff, int):
        if coeff < 0 or coeff == 1:
            raise DomainError("coefficients must be Z (0) or Z/m with m >= 2")
        return coeff
    s = str(coeff).lower().replace("/", "").replace("_", "")
    if s in ("z", "zz", "int", "integers"):
        return 0
    if s.startswith("z") and s[1:].isdigit():
        m = int(s[1:])
        if m >= 2:
            return m
    if s.isdigit() and int(s) >= 2:
        return int(s)
    raise ParseError(f"unknown coefficient group {coeff!r}", token=str(coeff))


def bredon_homology_direct(X: GComplex, coeff=2, top: int | None = None) -> GradedDims:
    """Bredon homology with constant coefficients A, from the orbit category.

    A is Z (``0``/``"z"``) or Z/m.  For prime m the quotient is solved by a
    weighted union-find over F_m, which scales to large complexes; other
    coefficient groups use integer lattices and Smith normal form.  For Z/m
    with m composite, ``dims[k]`` is the minimal number of generators and
    ``torsion[k]`` lists the cyclic orders.
    """
    m = parse_coefficients(coeff)
    top = X.dimension if top is None else top
    if X.n == 0:
        return GradedDims({k: 0 for k in range(top + 1)}, ring=m)
    if m and is_prime(m):
        return _direct_fp(X, m, top)
    H = _direct_lattice(X, m, top)
    if m:
        # every summand is cyclic of order dividing m
        dims = {k: len(H.torsion.get(k, ())) for k in range(top + 1)}
        return GradedDims(dims, H.torsion, ring=m)
    return H


def bredon_homology_collapse(X: GComplex, p: int = 2, top: int | None = None) -> GradedDims:
    """Sum over isotropy strata of H_*(C(X^H, X^{>H}) (x)_{W(H)} F_p).

    Only valid for p-groups; other groups are refused.
    """
    G = X.group
    if not G.is_p_group(p):
        raise DomainError(f"the collapse route needs a {p}-group (order {G.order} is not a power of {p})")
    top = X.dimension if top is None else top
    total = GradedDims({k: 0 for k in range(top + 1)}, ring=p)
    for S in strata(X, p):
        Q = S.coinvariants(p)
        total = total + homology_fp(Q, p, range(0, top + 1))
    return total.truncated(0, top)


def orbit_complex(X: GComplex):
    """Cells of X/G: one per G-orbit of simplices (rigid action).

    Returns the integral chain complex of the quotient.
    """
    if not X.rigid:
        raise PreconditionError("orbit space chains need a rigid complex")
    W = X.group
    acts = {k: X.simplex_action(k) for k in X.simplices}
    C = X.chain_complex(0)
    return coinvariants_orbits(C, acts, W.order)


def coinvariants_orbits(C: ChainComplex, acts: dict[int, SignedAction], order: int) -> ChainComplex:
    """Coinvariants of a signed permutation complex where stabilizers act
    by +1 (so every orbit is a Z summand)."""
    orbit_of, coef, sizes, first = {}, {}, {}, {}
    for k in C.degrees:
        act = acts[k]
        n = C.dim(k)
        o = -np.ones(n, dtype=np.int64)
        c = np.zeros(n, dtype=np.int64)
        cnt = 0
        f = []
        for i in range(n):
            if o[i] >= 0:
                continue
            for g in range(order):
                j = int(act.perm[g, i])
                s = int(act.sign[g, i])
                if o[j] >= 0:
                    if o[j] != cnt or c[j] != s:
                        if o[j] == cnt:
                            raise PreconditionError("a stabilizer reverses orientation")
                    continue
                o[j] = cnt
                c[j] = s
            f.append(i)
            cnt += 1
        orbit_of[k], coef[k], sizes[k], first[k] = o, c, cnt, f
    d = {}
    for k in C.degrees:
        if k - 1 not in orbit_of:
            continue
        M = sp.csc_matrix(C.boundary(k))
        rows, cols, vals = [], [], []
        for c_, i in enumerate(first[k]):
            lo, hi = M.indptr[i], M.indptr[i + 1]
            for r, v in zip(M.indices[lo:hi], M.data[lo:hi]):
                rows.append(int(orbit_of[k - 1][r]))
                cols.append(c_)
                vals.append(int(v) * int(coef[k - 1][r]))
        d[k] = sp.csr_matrix((vals, (rows, cols)), shape=(sizes[k - 1], sizes[k]), dtype=np.int64)
    return ChainComplex(sizes, d, p=0)


def bredon_cohomology(X: GComplex, coeff=2, top: int | None = None) -> GradedDims:
    """H^*_G(X; A) computed as H^*(X/G; A) by universal coefficients."""
    m = parse_coefficients(coeff)
    top = X.dimension if top is None else top
    if X.n == 0:
        return GradedDims({k: 0 for k in range(top + 1)}, ring=m)
    Q = orbit_complex(X)
    if m and is_prime(m):
        H = homology_fp(Q.reduce_mod(m), m, range(0, top + 1))
        return H
    HZ = homology_z(Q, range(-1, top + 1))
    dims, tors = {}, {}
    for k in range(0, top + 1):
        if m == 0:
            dims[k] = HZ[k]
            t = HZ.torsion.get(k - 1, ())
            if t:
                tors[k] = tuple(t)
        else:
            from math import gcd
            # Hom(H_k, Z/m) (+) Ext(H_{k-1}, Z/m)
            parts = [m] * HZ[k]
            parts += [gcd(t, m) for t in HZ.torsion.get(k, ())]
            parts += [gcd(t, m) for t in HZ.torsion.get(k - 1, ())]
            parts = sorted(x for x in parts if x > 1)
            dims[k] = len(parts)
            if parts:
                tors[k] = tuple(parts)
    return GradedDims(dims, tors, ring=m)


def reduced(H: GradedDims) -> GradedDims:
    """Reduced Bredon homology: remove the point's A in degree 0."""
    out = GradedDims(dict(H.dims), dict(H.torsion), H.ring)
    if H.ring and is_prime(H.ring):
        out.dims[0] = out.dims.get(0, 0) - 1
    elif H.ring == 0:
        out.dims[0] = out.dims.get(0, 0) - 1
    else:
        t = list(out.torsion.get(0, ()))
        t.remove(H.ring)
        out.torsion[0] = tuple(t)
        out.dims[0] -= 1
    return out


# ---------------------------------------------------------------------------
# E^1 tables


@dataclass
class E1Table:
    """E^1_{s,q} dimensions over F_p, keyed by (s, q); s is the height."""

    prime: int
    flavor: str
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def add(self, s: int, q: int, v: int) -> None:
        if v:
            self.entries[(s, q)] = self.entries.get((s, q), 0) + v

    def column_sums(self, top: int) -> GradedDims:
        out = {d: 0 for d in range(0, top + 1)}
        for (s, q), v in self.entries.items():
            if 0 <= s + q <= top:
                out[s + q] += v
        return GradedDims(out, ring=self.prime)

    def to_tsv(self) -> str:
        lines = [f"{s}\t{q}\t{v}" for (s, q), v in sorted(self.entries.items())]
        return "\n".join(lines) + ("\n" if lines else "")


def e1_from_strata(X: GComplex, p: int = 2, flavor: str = "unreduced",
                   top: int | None = None) -> E1Table:
    """E^1 of the isotropy spectral sequence with H(F_p) coefficients.

    Each stratum contributes the Borel homology of a free based W(H)-complex,
    which is the reduced homology of its quotient.  In the unreduced flavor
    E^1_{h,q} collects degree h+q; the based flavor (for the unreduced
    suspension) adds the point column E^1_{0,0} and shifts to degree h+q-1.
    """
    if flavor not in ("unreduced", "based"):
        raise PreconditionError("flavor is 'unreduced' or 'based'")
    top = (X.dimension + (1 if flavor == "based" else 0)) if top is None else top
    T = E1Table(p, flavor)
    shift = 1 if flavor == "based" else 0
    if flavor == "based":
        T.add(0, 0, 1)
    for S in strata(X, p):
        Hs = homology_fp(S.coinvariants(p), p, range(0, top + 1))
        h = S.height
        for deg, v in Hs.dims.items():
            # total degree deg + shift, filtration h
            T.add(h, deg + shift - h, v)
    return T


def e1_nerve(G: FiniteGroup, F: Family | None, p: int, top: int) -> E1Table:
    """E^1 in nerve form for the unreduced suspension of E F.

    E^1_{0,0} is the point; for H in F (one per conjugacy class) of height h,
    E^1_{h,q} is the Borel homology of W(H) on the suspended augmented chains
    of the poset P_H = {K in F : K > H}, in degree h + q - 1.
    """
    F = proper_family(G) if F is None else F
    T = E1Table(p, "nerve")
    T.add(0, 0, 1)
    for H, _ in F.conjugacy_classes():
        h = F.height(H)
        P = subgroup_poset_above(G, F, H)
        W = P.weyl.group
        K = order_complex(P)
        C = reduced_chain_complex(K, p)
        mods = chain_modules(K, p)
        Cs = C.shifted(1)
        mods = {k + 1: M for k, M in mods.items()}
        B = borel_hyperhomology(W, Cs, mods, top - 1)
        for deg in range(0, top):
            v = B[deg]
            # deg = h + q - 1
            T.add(h, deg + 1 - h, v)
    return T


def phi_coefficients(G: FiniteGroup, p: int, top: int) -> GradedDims:
    """Geometric fixed points of H(Z/p) for a p-group, degrees 0..top.

    Computed as the column sums of the nerve E^1 for the family of proper
    subgroups; the spectral sequence collapses for p-groups.  Other groups
    are refused with the vanishing certificate attached.
    """
    if not G.is_p_group(p):
        cert = non_pgroup_vanishing_certificate(G)
        err = DomainError(
            f"geometric fixed points are only assembled for p-groups; "
            f"this group vanishes instead (gcd certificate = {cert})")
        err.certificate = cert
        raise err
    return e1_nerve(G, proper_family(G), p, top).column_sums(top)


# ---------------------------------------------------------------------------
# text format


def parse_gcomplex_text(text: str, G: FiniteGroup) -> GComplex:
    """``gcomplex`` header, ``vertex i`` lines, ``simplex v...`` lines and one
    ``act g perm...`` line per group element (omitted elements act trivially
    only if no ``act`` lines are given at all)."""
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines or lines[0][1].split()[0] != "gcomplex":
        raise ParseError("expected 'gcomplex' header", lines[0][0] if lines else None)
    verts: list[int] = []
    simp: list[tuple[int, ...]] = []
    acts: dict[int, list[int]] = {}
    for no, ln in lines[1:]:
        t = ln.split()
        try:
            vals = [int(x) for x in t[1:]]
        except ValueError:
            bad = next(x for x in t[1:] if not x.lstrip("-").isdigit())
            raise ParseError("non-integer token", no, bad) from None
        if t[0] == "vertex":
            if len(vals) != 1:
                raise ParseError("'vertex' takes one index", no)
            verts.append(vals[0])
        elif t[0] == "simplex":
            if not vals:
                raise ParseError("empty simplex", no)
            simp.append(tuple(vals))
        elif t[0] == "act":
            if not vals:
                raise ParseError("'act' needs a group element", no)
            acts[vals[0]] = vals[1:]
        else:
            raise ParseError("unknown directive", no, t[0])
    n = max(verts + [v for s in simp for v in s], default=-1) + 1
    if sorted(set(verts)) != list(range(len(set(verts)))) and verts:
        raise ParseError("vertices must be numbered 0..n-1")
    for s in simp:
        for v in s:
            if v < 0:
                raise ParseError("negative vertex index", token=str(v))
    if acts:
        for g in range(G.order):
            if g not in acts:
                raise ParseError(f"no action given for group element {g}")
            if len(acts[g]) != n:
                raise ParseError(f"'act {g}' must list {n} vertex images")
        perms = np.array([acts[g] for g in range(G.order)], dtype=np.int64)
    else:
        perms = np.tile(np.arange(n), (G.order, 1))
    simp += [(v,) for v in verts]
    return GComplex(G, n, simp, perms)


def format_gcomplex_text(X: GComplex) -> str:
    out = ["gcomplex"]
    out += [f"vertex {v}" for v in range(X.n)]
    for s in _maximal(X):
        if len(s) > 1:
            out.append("simplex " + " ".join(map(str, s)))
    for g in range(X.group.order):
        out.append(f"act {g} " + " ".join(map(str, X.perms[g].tolist())))
    return "\n".join(out) + "\n"
