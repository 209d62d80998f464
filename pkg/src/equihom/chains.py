"""Chain complexes, group modules, resolutions and Borel hyperhomology.

The coefficient ring of a complex is encoded by an integer ``p``: a prime
means F_p and ``0`` means the integers.  Boundary matrices are stored as
scipy sparse ``int64`` matrices; ``d[k]`` maps degree k to degree k-1.

Group modules are given by one matrix per group element.  A free
``F_p[G]``-module of rank r is stored as F_p^{r|G|} with coordinate
``j*|G| + g`` holding the coefficient of ``g . e_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from . import linalg as la
from .errors import ConsistencyError, PreconditionError, TruncationError
from .groups import FiniteGroup


def _zero(rows: int, cols: int) -> sp.csr_matrix:
    return sp.csr_matrix((rows, cols), dtype=np.int64)


def _reduce_sparse(M: sp.csr_matrix, p: int) -> sp.csr_matrix:
    """Entries mod p without densifying."""
    M = sp.csr_matrix(M, dtype=np.int64, copy=True)
    M.data %= p
    M.eliminate_zeros()
    return M


def _sparse(M) -> sp.csr_matrix:
    if sp.issparse(M):
        return sp.csr_matrix(M, dtype=np.int64)
    A = np.asarray(M, dtype=np.int64)
    if A.ndim != 2:
        A = A.reshape(A.shape[0] if A.size else 0, -1)
    return sp.csr_matrix(A)


# ---------------------------------------------------------------------------
# graded dimensions


@dataclass
class GradedDims:
    """Dimensions (and integral torsion) indexed by degree."""

    dims: dict[int, int] = field(default_factory=dict)
    torsion: dict[int, tuple[int, ...]] = field(default_factory=dict)
    ring: int = 2

    def __getitem__(self, k: int) -> int:
        return self.dims.get(k, 0)

    def as_list(self, lo: int = 0, hi: int | None = None) -> list[int]:
        if hi is None:
            hi = max(self.dims, default=lo)
        return [self[k] for k in range(lo, hi + 1)]

    def support(self) -> list[int]:
        return sorted(k for k, v in self.dims.items() if v or self.torsion.get(k))

    def shifted(self, s: int) -> "GradedDims":
        return GradedDims({k + s: v for k, v in self.dims.items()},
                          {k + s: v for k, v in self.torsion.items()}, self.ring)

    def __add__(self, other: "GradedDims") -> "GradedDims":
        dims = dict(self.dims)
        for k, v in other.dims.items():
            dims[k] = dims.get(k, 0) + v
        tors = {k: tuple(v) for k, v in self.torsion.items()}
        for k, v in other.torsion.items():
            tors[k] = tuple(sorted(tors.get(k, ()) + tuple(v)))
        return GradedDims(dims, tors, self.ring)

    def truncated(self, lo: int, hi: int) -> "GradedDims":
        return GradedDims({k: self[k] for k in range(lo, hi + 1)},
                          {k: v for k, v in self.torsion.items() if lo <= k <= hi}, self.ring)

    def equal_on(self, other: "GradedDims", lo: int, hi: int) -> bool:
        return all(self[k] == other[k] and tuple(self.torsion.get(k, ())) ==
                   tuple(other.torsion.get(k, ())) for k in range(lo, hi + 1))

    def to_tsv(self, lo: int | None = None, hi: int | None = None) -> str:
        lo = min(self.dims, default=0) if lo is None else lo
        hi = max(self.dims, default=lo) if hi is None else hi
        lines = []
        for k in range(lo, hi + 1):
            t = self.torsion.get(k)
            row = f"{k}\t{self[k]}"
            if t:
                row += "\t" + ",".join(map(str, t))
            lines.append(row)
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# chain complexes


class ChainComplex:
    """A bounded chain complex of finite free modules over F_p or Z.

    ``dims`` maps degree to rank and ``d`` maps degree k to the boundary
    ``C_k -> C_{k-1}``.  Missing boundaries are zero.  ``d o d = 0`` is
    checked at construction unless ``check=False``.
    """

    def __init__(self, dims: Mapping[int, int], d: Mapping[int, object] | None = None,
                 p: int = 2, check: bool = True):
        self.p = int(p)
        self.dims = {int(k): int(v) for k, v in dims.items() if v is not None}
        self.d: dict[int, sp.csr_matrix] = {}
        for k, M in (d or {}).items():
            M = _sparse(M)
            rows, cols = self.dim(k - 1), self.dim(k)
            if M.shape != (rows, cols):
                if M.nnz == 0:
                    M = _zero(rows, cols)
                else:
                    raise PreconditionError(
                        f"boundary d_{k} has shape {M.shape}, expected {(rows, cols)}")
            if self.p and M.nnz:
                M = _reduce_sparse(M, self.p)
            self.d[int(k)] = M
        if check:
            self.check_dd()

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    @property
    def degrees(self) -> list[int]:
        return sorted(k for k, v in self.dims.items() if v)

    def boundary(self, k: int) -> sp.csr_matrix:
        M = self.d.get(k)
        if M is None:
            return _zero(self.dim(k - 1), self.dim(k))
        return M

    def check_dd(self) -> None:
        for k in list(self.d):
            a, b = self.boundary(k - 1), self.boundary(k)
            if a.shape[1] and b.shape[1] and a.shape[0]:
                prod = sp.csr_matrix(a @ b)
                if self.p:
                    prod = _reduce_sparse(prod, self.p)
                prod.eliminate_zeros()
                if prod.nnz:
                    raise ConsistencyError(f"d_{k-1} o d_{k} != 0")

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.dims.items())

    def reduce_mod(self, p: int) -> "ChainComplex":
        return ChainComplex(self.dims, self.d, p=p, check=False)

    def shifted(self, s: int) -> "ChainComplex":
        """Degree shift ``C[s]_k = C_{k-s}``; boundaries keep their signs."""
        return ChainComplex({k + s: v for k, v in self.dims.items()},
                            {k + s: M for k, M in self.d.items()}, p=self.p, check=False)

    def __repr__(self) -> str:
        ring = f"F_{self.p}" if self.p else "Z"
        return f"ChainComplex({ring}, dims={dict(sorted(self.dims.items()))})"


def homology_fp(C: ChainComplex, p: int | None = None,
                degrees: Iterable[int] | None = None) -> GradedDims:
    """dim H_k = dim C_k - rank d_k - rank d_{k+1} over F_p."""
    p = C.p if p is None else p
    if not p:
        raise PreconditionError("homology_fp needs a prime; use homology_z over Z")
    ks = sorted(set(C.degrees) if degrees is None else set(degrees))
    ranks: dict[int, int] = {}

    def rank(k):
        if k not in ranks:
            M = C.boundary(k)
            ranks[k] = la.rank_mod_p(M, p) if M.nnz else 0
        return ranks[k]

    out = {k: C.dim(k) - rank(k) - rank(k + 1) for k in ks}
    return GradedDims(out, ring=p)


def homology_z(C: ChainComplex, degrees: Iterable[int] | None = None) -> GradedDims:
    """Integral homology: Betti numbers plus torsion from Smith normal form."""
    ks = sorted(set(C.degrees) if degrees is None else set(degrees))
    inv: dict[int, list[int]] = {}

    def factors(k):
        if k not in inv:
            M = C.boundary(k)
            inv[k] = la.invariant_factors(M) if M.nnz else []
        return inv[k]

    dims, tors = {}, {}
    for k in ks:
        dims[k] = C.dim(k) - len(factors(k)) - len(factors(k + 1))
        t = tuple(f for f in factors(k + 1) if f > 1)
        if t:
            tors[k] = t
    return GradedDims(dims, tors, ring=0)


def uct_prediction(HZ: GradedDims, p: int, degrees: Iterable[int]) -> dict[int, int]:
    """dim H_k(C ; F_p) predicted from H_*(C ; Z) by universal coefficients."""
    def ptors(k):
        return sum(1 for t in HZ.torsion.get(k, ()) if t % p == 0)
    return {k: HZ[k] + ptors(k) + ptors(k - 1) for k in degrees}


def check_universal_coefficients(C: ChainComplex, p: int) -> bool:
    if C.p:
        raise PreconditionError("universal coefficients check needs an integral complex")
    ks = list(range(min(C.degrees, default=0) - 1, max(C.degrees, default=0) + 2))
    HZ = homology_z(C, ks)
    Hp = homology_fp(C.reduce_mod(p), p, ks)
    pred = uct_prediction(HZ, p, ks)
    return all(Hp[k] == pred[k] for k in ks)


def random_integral_complex(rng: np.random.Generator, max_dim: int = 4,
                            max_rank: int = 5, entry: int = 3) -> ChainComplex:
    """Random small integral complex built as d_k = A_k B_k with B_k A_{k+1} = 0.

    Each boundary factors through a random change of basis so that torsion
    appears; d o d = 0 by construction.
    """
    ranks = [int(rng.integers(1, max_rank + 1)) for _ in range(max_dim + 1)]
    # split C_k = Z_k (+) S_k, with d_k : S_k -> Z_{k-1} random
    z = [int(rng.integers(0, r + 1)) for r in ranks]
    z[0] = ranks[0]
    bases, inverses = [], []
    for r in ranks:
        # random unimodular matrix from elementary row operations
        U = np.eye(r, dtype=np.int64)
        Ui = np.eye(r, dtype=np.int64)
        for _ in range(3 * r):
            i, j = (int(x) for x in rng.integers(0, r, size=2))
            c = int(rng.integers(-1, 2))
            if i != j and c:
                U[i] += c * U[j]
                Ui[:, j] -= c * Ui[:, i]
        bases.append(U)
        inverses.append(Ui)
    d = {}
    for k in range(1, max_dim + 1):
        s = ranks[k] - z[k]
        zk = z[k - 1]
        core = np.zeros((ranks[k - 1], ranks[k]), dtype=np.int64)
        if s and zk:
            core[:zk, z[k]:] = rng.integers(-entry, entry + 1, size=(zk, s))
        # coordinates: columns 0..z[k]-1 are cycles, first z[k-1] rows are cycles
        d[k] = bases[k - 1] @ core @ inverses[k]
    return ChainComplex(dict(enumerate(ranks)), d, p=0)


# ---------------------------------------------------------------------------
# group modules


class GroupModule:
    """A finite-dimensional F_p[G]-module given by one matrix per element."""

    def __init__(self, group: FiniteGroup, p: int, mats: Sequence, check: bool = True):
        self.group = group
        self.p = int(p)
        self.mats = [np.asarray(M, dtype=np.int64) % self.p for M in mats]
        if len(self.mats) != group.order:
            raise PreconditionError("need one matrix per group element")
        self.dim = self.mats[0].shape[0] if self.mats else 0
        if check:
            self.check()

    def check(self) -> None:
        G, p = self.group, self.p
        if not np.array_equal(self.mats[G.identity], np.eye(self.dim, dtype=np.int64)):
            raise PreconditionError("identity does not act trivially")
        for a in range(G.order):
            for b in range(G.order):
                if not np.array_equal((self.mats[a] @ self.mats[b]) % p,
                                      self.mats[int(G.mult[a, b])]):
                    raise PreconditionError(f"action is not a homomorphism at ({a}, {b})")

    @classmethod
    def trivial(cls, G: FiniteGroup, p: int, dim: int = 1) -> "GroupModule":
        I = np.eye(dim, dtype=np.int64)
        return cls(G, p, [I] * G.order, check=False)

    @classmethod
    def from_permutations(cls, G: FiniteGroup, p: int, perms, signs=None) -> "GroupModule":
        """``perms[g][i]`` is the image of basis vector i; optional signs."""
        perms = np.asarray(perms, dtype=np.int64)
        n = perms.shape[1] if perms.ndim == 2 else 0
        mats = []
        for g in range(G.order):
            M = np.zeros((n, n), dtype=np.int64)
            s = np.ones(n, dtype=np.int64) if signs is None else np.asarray(signs[g])
            M[perms[g], np.arange(n)] = s % p
            mats.append(M)
        return cls(G, p, mats, check=False)

    @classmethod
    def regular(cls, G: FiniteGroup, p: int) -> "GroupModule":
        return cls.from_permutations(G, p, G.mult)

    @classmethod
    def from_generators(cls, G: FiniteGroup, p: int, gens: Sequence[int], images) -> "GroupModule":
        """Extend generator images to all elements, checking consistency."""
        images = [np.asarray(M, dtype=np.int64) % p for M in images]
        dim = images[0].shape[0]
        mats: list = [None] * G.order
        mats[G.identity] = np.eye(dim, dtype=np.int64)
        frontier = [G.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g, Mg in zip(gens, images):
                    b = int(G.mult[g, a])
                    M = (Mg @ mats[a]) % p
                    if mats[b] is None:
                        mats[b] = M
                        nxt.append(b)
                    elif not np.array_equal(mats[b], M):
                        raise PreconditionError("generator images do not define a homomorphism")
            frontier = nxt
        if any(M is None for M in mats):
            raise PreconditionError("elements given do not generate the group")
        return cls(G, p, mats)

    def coinvariants_dim(self) -> int:
        """dim M_G = dim M - rank of the span of (g - 1) M."""
        if self.dim == 0:
            return 0
        I = np.eye(self.dim, dtype=np.int64)
        stack = np.hstack([(M - I) % self.p for M in self.mats])
        return self.dim - la.rank_mod_p(stack, self.p)

    def invariants_dim(self) -> int:
        if self.dim == 0:
            return 0
        I = np.eye(self.dim, dtype=np.int64)
        stack = np.vstack([(M - I) % self.p for M in self.mats])
        return self.dim - la.rank_mod_p(stack, self.p)

    def restrict_to_subspace(self, basis: np.ndarray) -> "GroupModule":
        """Action on an invariant subspace spanned by the rows of ``basis``."""
        p = self.p
        B = np.asarray(basis, dtype=np.int64) % p
        R, piv = la.rref_mod_p(B, p)
        if len(piv) != B.shape[0]:
            raise PreconditionError("basis rows are dependent")
        mats = []
        for M in self.mats:
            img = (B @ M.T) % p       # rows: images of basis vectors
            # express each image in terms of B: coordinates via pivots of R
            coords = img[:, piv] % p
            # R rows are combinations of B rows: R = T B. image = c R = c T B.
            T = _solve_left(B, R, p)
            C = (coords @ T) % p
            if not np.array_equal((C @ B) % p, img):
                raise PreconditionError("subspace is not invariant")
            mats.append(C.T % p)
        return GroupModule(self.group, p, mats)


def _solve_left(B: np.ndarray, R: np.ndarray, p: int) -> np.ndarray:
    """T with T @ B = R (B full row rank, R its echelon form)."""
    k = B.shape[0]
    aug = np.hstack([B % p, np.eye(k, dtype=np.int64)])
    E, piv = la.rref_mod_p(aug, p)
    # E = [R | T]
    return E[:k, B.shape[1]:]


# ---------------------------------------------------------------------------
# equivariant complexes with signed-permutation bases


@dataclass
class SignedAction:
    """Action on a basis: ``perm[g, i]`` is the index of g.b_i and
    ``sign[g, i]`` the sign with ``g.b_i = sign * b_perm``."""

    perm: np.ndarray
    sign: np.ndarray

    def module(self, G: FiniteGroup, p: int) -> GroupModule:
        return GroupModule.from_permutations(G, p, self.perm, self.sign)


def coinvariants_free(C: ChainComplex, W: FiniteGroup, action: Mapping[int, SignedAction],
                      p: int, fixed: Mapping[int, Sequence[int]] | None = None) -> ChainComplex:
    """Coinvariants of a complex whose basis W permutes freely (up to sign).

    ``fixed`` lists basis elements making up a W-fixed basepoint summand;
    they survive unchanged.  Every other basis element must have trivial
    stabilizer.  The result has one basis element per orbit.
    """
    fixed = {k: set(v) for k, v in (fixed or {}).items()}
    reps: dict[int, np.ndarray] = {}       # basis index -> orbit index
    coef: dict[int, np.ndarray] = {}       # [b] = coef * [rep]
    sizes: dict[int, int] = {}
    for k in C.degrees:
        n = C.dim(k)
        act = action.get(k)
        orbit = -np.ones(n, dtype=np.int64)
        c = np.zeros(n, dtype=np.int64)
        count = 0
        for i in range(n):
            if orbit[i] >= 0:
                continue
            if i in fixed.get(k, ()):
                if act is not None and (np.any(act.perm[:, i] != i) or np.any(act.sign[:, i] != 1)):
                    raise PreconditionError(f"basepoint cell {i} in degree {k} is not fixed")
                orbit[i] = count
                c[i] = 1
                count += 1
                continue
            if act is None:
                if W.order > 1:
                    raise PreconditionError(f"no action given in degree {k}")
                orbit[i] = count
                c[i] = 1
                count += 1
                continue
            images = act.perm[:, i]
            if len(set(images.tolist())) != W.order:
                raise PreconditionError(f"basis element {i} in degree {k} has a nontrivial stabilizer")
            for g in range(W.order):
                j = int(images[g])
                if orbit[j] >= 0:
                    raise PreconditionError("action is not a permutation of the basis")
                orbit[j] = count
                # g.b_i = s b_j  =>  [b_j] = s [b_i]
                c[j] = int(act.sign[g, i])
            count += 1
        reps[k], coef[k], sizes[k] = orbit, c, count
    d = {}
    for k in C.degrees:
        M = C.boundary(k)
        if k - 1 not in reps or not M.nnz:
            continue
        M = sp.coo_matrix(M)
        rows = reps[k - 1][M.row]
        # pick representative columns: the first basis element of each orbit
        first = {}
        for i in range(C.dim(k)):
            first.setdefault(int(reps[k][i]), i)
        keep = np.array([first.get(int(reps[k][j])) == j for j in M.col], dtype=bool)
        if not keep.any():
            continue
        vals = M.data[keep] * coef[k - 1][M.row[keep]] * coef[k][M.col[keep]]
        Q = sp.coo_matrix((vals, (rows[keep], reps[k][M.col[keep]])),
                          shape=(sizes[k - 1], sizes[k])).tocsr()
        Q.sum_duplicates()
        d[k] = Q
    return ChainComplex(sizes, d, p=p)


# ---------------------------------------------------------------------------
# free resolutions over F_p[G]


def left_action_perm(G: FiniteGroup, rank: int, h: int) -> np.ndarray:
    """Index permutation of h acting on the free module of the given rank."""
    n = G.order
    base = np.asarray(G.mult[h], dtype=np.int64)
    return (np.arange(rank)[:, None] * n + base[None, :]).ravel()


def _act(G: FiniteGroup, rank: int, h: int, v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    out[left_action_perm(G, rank, h)] = v
    return out


def _orbit_matrix(G: FiniteGroup, rank: int, vectors: Sequence[np.ndarray]) -> np.ndarray:
    """All translates g.v as rows."""
    rows = []
    for v in vectors:
        for g in range(G.order):
            rows.append(_act(G, rank, g, v))
    return np.array(rows, dtype=np.int64).reshape(len(rows), rank * G.order)


@dataclass
class FreeResolution:
    """A free resolution F_L -> ... -> F_0 -> F_p of the trivial module.

    ``gens[s]`` holds the images d(e_j) in F_{s-1} of the free generators of
    F_s as vectors of length ``ranks[s-1] * |G|``.
    """

    group: FiniteGroup
    p: int
    ranks: list[int]
    gens: list[np.ndarray]

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def coefficients(self, s: int) -> np.ndarray:
        """Array c[i, j, g] with d(e_j) = sum c[i, j, g] g.e_i."""
        n = self.group.order
        r0, r1 = self.ranks[s - 1], self.ranks[s]
        G = self.gens[s]
        return G.reshape(r1, r0, n).transpose(1, 0, 2)

    def matrix(self, s: int) -> np.ndarray:
        """d_s as an F_p matrix F_s -> F_{s-1} (columns indexed j*|G| + g)."""
        G = self.group
        r0, r1 = self.ranks[s - 1], self.ranks[s]
        M = np.zeros((r0 * G.order, r1 * G.order), dtype=np.int64)
        for j in range(r1):
            v = self.gens[s][j]
            for g in range(G.order):
                M[:, j * G.order + g] = _act(G, r0, g, v)
        return M

    def check_exact(self) -> bool:
        """d_{s-1} d_s = 0 and exactness at F_0..F_{L-1}."""
        G, p = self.group, self.p
        prev = np.ones((1, G.order), dtype=np.int64)   # augmentation
        mats = [prev] + [self.matrix(s) for s in range(1, self.length + 1)]
        for s in range(1, len(mats)):
            if ((mats[s - 1] @ mats[s]) % p).any():
                return False
        for s in range(0, len(mats) - 1):
            n = mats[s].shape[1]
            ker = n - la.rank_mod_p(mats[s], p)
            img = la.rank_mod_p(mats[s + 1], p)
            if ker != img:
                return False
        return True


def minimal_resolution(G: FiniteGroup, p: int, length: int) -> FreeResolution:
    """Degreewise minimal resolution of F_p over F_p[G] through F_length.

    Each step takes the kernel K of the last differential and picks
    generators: first a basis of K modulo I.K (I the augmentation ideal,
    which suffices for p-groups by Nakayama), then, if the G-span is still
    short of K, further kernel vectors greedily.
    """
    n = G.order
    from .groups import generating_set
    ggens = generating_set(G) or [G.identity]
    ranks = [1]
    gens = [np.zeros((0, 0), dtype=np.int64)]
    cur = np.ones((1, n), dtype=np.int64)          # epsilon : F_0 -> F_p
    for s in range(1, length + 1):
        r = ranks[-1]
        K = la.nullspace_mod_p(cur, p)              # rows, inside F_{s-1}
        if K.shape[0] == 0:
            ranks.append(0)
            gens.append(np.zeros((0, r * n), dtype=np.int64))
            cur = np.zeros((r * n, 0), dtype=np.int64)
            continue
        IK = la.Span(r * n, p)
        for v in K:
            for g in ggens:
                IK.add((_act(G, r, g, v) - v) % p)
        chosen: list[np.ndarray] = []
        for v in K:
            if IK.add(v):
                chosen.append(v)
        span = la.Span(r * n, p)
        for v in chosen:
            for g in range(n):
                span.add(_act(G, r, g, v))
        if len(span) < K.shape[0]:
            for v in K:
                if not span.contains(v):
                    chosen.append(v)
                    for g in range(n):
                        span.add(_act(G, r, g, v))
                    if len(span) == K.shape[0]:
                        break
        if len(span) != K.shape[0]:
            raise ConsistencyError("generators do not span the kernel")
        gens.append(np.array(chosen, dtype=np.int64) % p)
        ranks.append(len(chosen))
        res = FreeResolution(G, p, ranks, gens)
        cur = res.matrix(s)
    return FreeResolution(G, p, ranks, gens)


_RES_CACHE: dict = {}


def cached_resolution(G: FiniteGroup, p: int, length: int) -> FreeResolution:
    """Minimal resolution memoized by (multiplication table, p, length)."""
    key = (G.mult.tobytes(), G.order, p)
    res = _RES_CACHE.get(key)
    if res is None or res.length < length:
        res = minimal_resolution(G, p, length)
        _RES_CACHE[key] = res
    return res


def borel_hyperhomology(W: FiniteGroup, C: ChainComplex, modules: Mapping[int, GroupModule],
                        top: int, resolution: FreeResolution | None = None) -> GradedDims:
    """Homology of the total complex of F ⊗_{F_p[W]} C in degrees <= top.

    ``modules[t]`` gives the W-action on C_t; the boundaries of C must be
    W-equivariant.  A resolution of length at least ``top + 1 - t_min`` is
    required (one is computed if none is passed).
    """
    p = C.p
    if not p:
        raise PreconditionError("Borel hyperhomology is computed over F_p")
    degs = C.degrees
    if not degs:
        return GradedDims({k: 0 for k in range(0, top + 1)}, ring=p)
    tmin = min(degs)
    need = top + 1 - tmin
    if resolution is None:
        resolution = cached_resolution(W, p, max(need, 0))
    if resolution.length < need:
        raise TruncationError(
            f"resolution length {resolution.length} < {need} needed for degree {top}")
    n = W.order
    inv_mats = {t: np.stack([modules[t].mats[int(W.inv[g])] for g in range(n)])
                for t in degs}
    for t in degs:
        if modules[t].dim != C.dim(t):
            raise PreconditionError(f"module in degree {t} has wrong dimension")
    for t in degs:
        M = C.boundary(t)
        if M.nnz and t - 1 in modules:
            Md = M.toarray()
            for g in range(n):
                if ((modules[t - 1].mats[g] @ Md - Md @ modules[t].mats[g]) % p).any():
                    raise PreconditionError(f"boundary d_{t} is not equivariant")

    def blocks(m):
        out = []
        for t in degs:
            s = m - t
            if 0 <= s <= resolution.length:
                out.append((s, t, resolution.ranks[s] * C.dim(t)))
        return out

    def offsets(bl):
        off, pos = {}, 0
        for s, t, size in bl:
            off[(s, t)] = pos
            pos += size
        return off, pos

    def total_d(m):
        src, dst = blocks(m), blocks(m - 1)
        so, sn = offsets(src)
        do, dn = offsets(dst)
        D = np.zeros((dn, sn), dtype=np.int64)
        for s, t, _ in src:
            c = C.dim(t)
            if c == 0:
                continue
            # horizontal F_s (x) C_t -> F_{s-1} (x) C_t
            if s >= 1 and (s - 1, t) in do:
                coef = resolution.coefficients(s) % p           # (r_{s-1}, r_s, n)
                blk = np.einsum("ijg,gab->iajb", coef, inv_mats[t]) % p
                r0, r1 = resolution.ranks[s - 1], resolution.ranks[s]
                blk = blk.reshape(r0 * c, r1 * c)
                D[do[(s - 1, t)]:do[(s - 1, t)] + r0 * c, so[(s, t)]:so[(s, t)] + r1 * c] += blk
            # vertical (-1)^s d_t
            if (s, t - 1) in do and C.boundary(t).nnz:
                r = resolution.ranks[s]
                dt = C.boundary(t).toarray() * (-1) ** s
                c0 = C.dim(t - 1)
                blk = np.kron(np.eye(r, dtype=np.int64), dt)
                D[do[(s, t - 1)]:do[(s, t - 1)] + r * c0, so[(s, t)]:so[(s, t)] + r * c] += blk
        return D % p, sn

    ranks = {}
    dims = {}
    size = {}
    for m in range(tmin, top + 2):
        D, sn = total_d(m)
        size[m] = sn
        ranks[m] = la.rank_mod_p(D, p) if D.size else 0
    for m in range(tmin, top + 1):
        dims[m] = size[m] - ranks[m] - ranks[m + 1]
    out = {m: dims.get(m, 0) for m in range(min(0, tmin), top + 1)}
    return GradedDims(out, ring=p)


def group_homology(G: FiniteGroup, M: GroupModule, top: int,
                   resolution: FreeResolution | None = None) -> GradedDims:
    """H_k(G; M) for 0 <= k <= top via a minimal resolution."""
    C = ChainComplex({0: M.dim}, {}, p=M.p)
    return borel_hyperhomology(G, C, {0: M}, top, resolution).truncated(0, top)


def bar_homology(G: FiniteGroup, M: GroupModule, top: int) -> GradedDims:
    """H_k(G; M), k <= top, from the normalized bar complex (oracle).

    C_s = M (x) F_p[(G - e)^s], with M made a right module by m.g = g^{-1} m.
    Only meant for |G| <= 8 and top <= 3.
    """
    import itertools
    p, n, e = M.p, G.order, G.identity
    nonid = [g for g in range(n) if g != e]
    tuples = {s: list(itertools.product(nonid, repeat=s)) for s in range(top + 2)}
    index = {s: {t: i for i, t in enumerate(tuples[s])} for s in tuples}
    dm = M.dim
    right = [M.mats[int(G.inv[g])] for g in range(n)]
    d = {}
    for s in range(1, top + 2):
        rows, cols = len(tuples[s - 1]) * dm, len(tuples[s]) * dm
        D = np.zeros((rows, cols), dtype=np.int64)
        for j, tup in enumerate(tuples[s]):
            cj = slice(j * dm, (j + 1) * dm)
            # m g1 (x) [g2 | ... ]
            i = index[s - 1][tup[1:]]
            D[i * dm:(i + 1) * dm, cj] += right[tup[0]]
            for k in range(s - 1):
                prod = int(G.mult[tup[k], tup[k + 1]])
                if prod == e:
                    continue
                t2 = tup[:k] + (prod,) + tup[k + 2:]
                i = index[s - 1][t2]
                D[i * dm:(i + 1) * dm, cj] += (-1) ** (k + 1) * np.eye(dm, dtype=np.int64)
            i = index[s - 1][tup[:-1]]
            D[i * dm:(i + 1) * dm, cj] += (-1) ** s * np.eye(dm, dtype=np.int64)
        d[s] = D % p
    dims = {s: len(tuples[s]) * dm for s in range(top + 2)}
    C = ChainComplex(dims, d, p=p)
    return homology_fp(C, p, range(top + 1))


# ---------------------------------------------------------------------------
# matrix exchange format


def format_matrix(M, ring: str) -> str:
    A = sp.coo_matrix(_sparse(M))
    out = [f"matrix {A.shape[0]} {A.shape[1]} {ring}"]
    for r, c, v in sorted(zip(A.row.tolist(), A.col.tolist(), A.data.tolist())):
        if v:
            out.append(f"entry {r} {c} {v}")
    return "\n".join(out) + "\n"


def parse_matrix(text: str) -> tuple[sp.csr_matrix, str]:
    from .errors import ParseError
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty matrix file")
    no, head = lines[0]
    tok = head.split()
    if tok[0] != "matrix" or len(tok) != 4:
        raise ParseError("expected 'matrix <rows> <cols> <ring>'", no, tok[0])
    try:
        r, c = int(tok[1]), int(tok[2])
    except ValueError:
        raise ParseError("matrix dimensions must be integers", no) from None
    ring = tok[3]
    if ring != "z" and not (ring.startswith("f") and ring[1:].isdigit()):
        raise ParseError("ring must be 'z' or 'f<p>'", no, ring)
    rows, cols, vals = [], [], []
    for no, ln in lines[1:]:
        t = ln.split()
        if t[0] != "entry" or len(t) != 4:
            raise ParseError("expected 'entry r c v'", no, t[0])
        try:
            i, j, v = int(t[1]), int(t[2]), int(t[3])
        except ValueError:
            raise ParseError("non-integer entry", no) from None
        if not (0 <= i < r and 0 <= j < c):
            raise ParseError("entry out of range", no)
        rows.append(i)
        cols.append(j)
        vals.append(v)
    M = sp.coo_matrix((vals, (rows, cols)), shape=(r, c), dtype=np.int64).tocsr()
    return M, ring
