"""Split extraspecial 2-groups and their decorated isotropic posets.

V_n = F_2^{2n} is stored as ints: bit 2i is the coordinate a_i of v_{1,i}
and bit 2i+1 the coordinate b_i of v_{2,i} (i counted from 0).  The split
form is q(v) = sum a_i b_i, with polarization b(x, y) = sum a_i b'_i + a'_i b_i.

The extension 1 -> Z/2 -> V~_n -> V_n -> 1 uses the cocycle
c(v, w) = sum a_i(v) b_i(w), so that c(v, v) = q(v) and
c(v, w) + c(w, v) = b(v, w).  The element (v, e) has index 2v + e.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import caps
from .chains import GradedDims, GroupModule, group_homology, homology_fp
from .errors import PreconditionError
from .groups import FiniteGroup, Subgroup, bits, closure, popcount, weyl_group
from .posets import GPoset, chain_modules, order_complex, reduced_chain_complex
from . import linalg as la

MAX_WIDTH = 3


# ---------------------------------------------------------------------------
# quadratic space


@dataclass(frozen=True)
class QuadraticSpace:
    n: int

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def size(self) -> int:
        return 1 << (2 * self.n)

    def vectors(self) -> range:
        return range(self.size)

    def v1(self, i: int) -> int:
        return 1 << (2 * i)

    def v2(self, i: int) -> int:
        return 1 << (2 * i + 1)

    def q(self, v: int) -> int:
        return popcount(v & (v >> 1) & _EVEN[self.n]) & 1

    def b(self, x: int, y: int) -> int:
        m = _EVEN[self.n]
        return (popcount(x & (y >> 1) & m) + popcount(y & (x >> 1) & m)) & 1

    def cocycle(self, v: int, w: int) -> int:
        return popcount(v & (w >> 1) & _EVEN[self.n]) & 1


_EVEN = {n: sum(1 << (2 * i) for i in range(n)) for n in range(MAX_WIDTH + 2)}


def q_eval(V: QuadraticSpace, v: int) -> int:
    return V.q(v)


def b_eval(V: QuadraticSpace, x: int, y: int) -> int:
    return V.b(x, y)


def check_quadratic_space(V: QuadraticSpace) -> bool:
    """q(v_1i) = q(v_2i) = 0, q(v_1i + v_2i) = 1, additivity across blocks,
    and b equals q(x+y) + q(x) + q(y), bilinear, alternating, nondegenerate."""
    n = V.n
    for i in range(n):
        if V.q(V.v1(i)) or V.q(V.v2(i)) or V.q(V.v1(i) | V.v2(i)) != 1:
            return False
    blocks = [3 << (2 * i) for i in range(n)]
    for v in V.vectors():
        if V.q(v) != sum(V.q(v & m) for m in blocks) % 2:
            return False
        if V.b(v, v):
            return False
    for x in V.vectors():
        for y in V.vectors():
            if V.b(x, y) != (V.q(x ^ y) + V.q(x) + V.q(y)) % 2:
                return False
    # bilinearity on a basis suffices once additivity of b in each slot holds
    basis = [1 << j for j in range(V.dim)]
    for x in V.vectors():
        for y in basis:
            for z in basis:
                if V.b(x, y ^ z) != V.b(x, y) ^ V.b(x, z):
                    return False
    gram = np.array([[V.b(x, y) for y in basis] for x in basis], dtype=np.int64)
    return la.rank_mod_p(gram, 2) == V.dim if V.dim else True


# ---------------------------------------------------------------------------
# subspaces of F_2^m as reduced echelon bases


def echelon(vectors: list[int]) -> tuple[int, ...]:
    """Reduced echelon basis: distinct leading bits, each cleared elsewhere,
    sorted by decreasing leading bit."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    basis.sort(reverse=True)
    # clear leading bits from the other rows
    out = list(basis)
    for i, b in enumerate(out):
        lead = b.bit_length() - 1
        for j in range(len(out)):
            if j != i and out[j] >> lead & 1:
                out[j] ^= b
    return tuple(sorted(out, reverse=True))


def span(basis: tuple[int, ...]) -> list[int]:
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return sorted(out)


def enumerate_q_isotropic(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-dimensional subspaces of V_n on which q vanishes, as echelon
    bases, sorted and duplicate-free."""
    if not 0 <= n <= MAX_WIDTH:
        raise PreconditionError(f"width must be in 0..{MAX_WIDTH}")
    if not 0 <= k <= n:
        return [] if k > n else []
    return list(_isotropic_levels(n)[k])


@lru_cache(maxsize=None)
def _isotropic_levels(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    V = QuadraticSpace(n)
    singular = [v for v in V.vectors() if v and not V.q(v)]
    levels = [((),)]
    for k in range(1, n + 1):
        nxt = set()
        for U in levels[-1]:
            elems = span(U)
            for v in singular:
                if v in elems:
                    continue
                if any(V.b(v, u) for u in U):
                    continue
                nxt.add(echelon(list(U) + [v]))
        levels.append(tuple(sorted(nxt)))
    # brute-force check: q vanishes on every vector of every subspace
    for lev in levels:
        for U in lev:
            assert all(V.q(x) == 0 for x in span(U))
    return tuple(levels)


def count_q_isotropic(n: int, k: int) -> int:
    return len(enumerate_q_isotropic(n, k))


def v_formula_as_printed(n: int, k: int) -> int | Fraction:
    """Literal value of 2^{k(k-1)/2} * prod_{j<k}(2^{2n-2j-1} + 2^{n-j-1} - 1)
    / prod_{j=1..k}(2^j - 1)."""
    num = Fraction(2) ** (k * (k - 1) // 2)
    for j in range(k):
        num *= Fraction(2) ** (2 * n - 2 * j - 1) + Fraction(2) ** (n - j - 1) - 1
    for j in range(1, k + 1):
        num /= 2 ** j - 1
    return int(num) if num.denominator == 1 else num


def isotropic_counts(n: int) -> list[tuple[int, int, int | Fraction]]:
    """Rows (k, enumerated, printed formula) for k = 1..n."""
    return [(k, count_q_isotropic(n, k), v_formula_as_printed(n, k)) for k in range(1, n + 1)]


# ---------------------------------------------------------------------------
# the group


@dataclass
class ExtraspecialGroup:
    n: int
    space: QuadraticSpace
    group: FiniteGroup
    center: Subgroup
    projection: np.ndarray      # element index -> vector in V_n

    def lift(self, v: int, e: int = 0) -> int:
        return 2 * v + (e & 1)

    def z(self) -> int:
        """The central involution (0, 1)."""
        return 1

    def order_spectrum(self) -> dict[int, int]:
        spec: dict[int, int] = {}
        for g in range(self.group.order):
            o = self.group.element_order(g)
            spec[o] = spec.get(o, 0) + 1
        return dict(sorted(spec.items()))

    def exponent(self) -> int:
        return int(np.lcm.reduce(list(self.order_spectrum())))


@lru_cache(maxsize=None)
def build_extraspecial(n: int) -> ExtraspecialGroup:
    """V~_n of order 2^{2n+1}; n = 0 gives the center Z/2 alone."""
    if not 0 <= n <= MAX_WIDTH:
        raise PreconditionError(f"width must be in 0..{MAX_WIDTH}")
    V = QuadraticSpace(n)
    m = V.size
    N = 2 * m
    caps.check("MAX_GROUP_ORDER", caps.MAX_GROUP_ORDER, N)
    c = np.array([[V.cocycle(v, w) for w in range(m)] for v in range(m)], dtype=np.int64)
    vv = np.arange(N) >> 1
    ee = np.arange(N) & 1
    prod_v = vv[:, None] ^ vv[None, :]
    prod_e = ee[:, None] ^ ee[None, :] ^ c[vv[:, None], vv[None, :]]
    mult = 2 * prod_v + prod_e
    labels = [f"({v},{e})" for v, e in zip(vv.tolist(), ee.tolist())]
    G = FiniteGroup(mult, 0, labels, name=f"V~{n}")
    return ExtraspecialGroup(n, V, G, Subgroup(G, 0b11), vv.copy())


def check_extraspecial(E: ExtraspecialGroup) -> bool:
    """Squares and commutators of lifts against q and b (all pairs)."""
    G, V = E.group, E.space
    for v in V.vectors():
        x = E.lift(v)
        if G.mul(x, x) != E.lift(0, V.q(v)):
            return False
        for w in V.vectors():
            y = E.lift(w)
            if G.commutator(x, y) != E.lift(0, V.b(v, w)):
                return False
    center = [g for g in range(G.order) if all(G.mul(g, h) == G.mul(h, g) for h in range(G.order))]
    return center == [0, 1] or (E.n == 0 and center == [0, 1])


# ---------------------------------------------------------------------------
# decorations


@dataclass(frozen=True)
class DecoratedSubspace:
    """An isotropic U with lift bits on its echelon basis."""

    basis: tuple[int, ...]
    lift_bits: tuple[int, ...]
    mask: int = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def label(self) -> str:
        return "[" + ",".join(f"{u}:{e}" for u, e in zip(self.basis, self.lift_bits)) + "]"


def decorations(E: ExtraspecialGroup, U: tuple[int, ...]) -> list[DecoratedSubspace]:
    """All 2^k elementary abelian lifts of U meeting the center trivially."""
    G = E.group
    out = []
    for eps in itertools.product((0, 1), repeat=len(U)):
        H = closure(G, [E.lift(u, e) for u, e in zip(U, eps)])
        out.append(DecoratedSubspace(U, eps, H.mask))
    return out


def is_decoration(E: ExtraspecialGroup, H: Subgroup, U: tuple[int, ...]) -> bool:
    G = E.group
    els = H.elements()
    if H.mask & 0b10:                           # contains the central involution
        return False
    if any(G.mul(g, g) != 0 for g in els):
        return False
    if any(G.mul(a, b) != G.mul(b, a) for a in els for b in els):
        return False
    proj = sorted({int(E.projection[g]) for g in els})
    return proj == span(U) and len(els) == len(proj)


def decorated_poset(n: int) -> GPoset:
    """Decorated q-isotropic subspaces of dimension >= 1, ordered by
    inclusion of subgroups, with V~_n acting by conjugation."""
    E = build_extraspecial(n)
    G = E.group
    elems: list[DecoratedSubspace] = []
    for k in range(1, n + 1):
        for U in enumerate_q_isotropic(n, k):
            elems.extend(decorations(E, U))
    caps.check("MAX_POSET_SIZE", caps.poset_cap(), len(elems))
    masks = [d.mask for d in elems]
    m = len(elems)
    leq = np.zeros((m, m), dtype=bool)
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            leq[i, j] = a & b == a
    index = {mk: i for i, mk in enumerate(masks)}
    perms = np.empty((G.order, m), dtype=np.int64)
    for g in range(G.order):
        row = G.conj[g]
        for i, mk in enumerate(masks):
            img = 0
            for h in bits(mk):
                img |= 1 << int(row[h])
            perms[g, i] = index[img]
    P = GPoset(leq, G, perms, elems, check=False)
    P.extraspecial = E
    return P


def undecorated_poset(n: int) -> GPoset:
    """Nonzero q-isotropic subspaces ordered by inclusion (no action)."""
    elems = [U for k in range(1, n + 1) for U in enumerate_q_isotropic(n, k)]
    spans = [sum(1 << x for x in span(U)) for U in elems]
    m = len(elems)
    leq = np.array([[a & b == a for b in spans] for a in spans], dtype=bool).reshape(m, m)
    return GPoset(leq, None, None, elems, check=False)


def decoration_orbits(P: GPoset) -> dict[int, int]:
    """Number of conjugacy classes of decorated subspaces per dimension."""
    seen = np.zeros(P.n, dtype=bool)
    out: dict[int, int] = {}
    for i in range(P.n):
        if seen[i]:
            continue
        seen[P.perms[:, i]] = True
        k = P.labels[i].dim
        out[k] = out.get(k, 0) + 1
    return out


def lifts_conjugate(P: GPoset) -> bool:
    """All decorations of a fixed U form a single conjugacy class."""
    by_u: dict[tuple[int, ...], set[int]] = {}
    for i, d in enumerate(P.labels):
        by_u.setdefault(d.basis, set()).add(i)
    for members in by_u.values():
        i = min(members)
        if set(P.perms[:, i].tolist()) != members:
            return False
    return True


# ---------------------------------------------------------------------------
# homology of the posets


@dataclass
class PosetHomology:
    dims: GradedDims
    concentrated: bool
    module: GroupModule | None = None
    counts: list[int] = field(default_factory=list)


def decorated_homology(n: int, with_module: bool = True) -> PosetHomology:
    """Reduced F_2-homology of the decorated poset of V~_n.

    The order complex has dimension n - 1, so the top homology is the kernel
    of the top boundary; when requested the V~_n-action on it is returned.
    """
    P = decorated_poset(n)
    K = order_complex(P)
    C = reduced_chain_complex(K, 2)
    H = homology_fp(C, 2, range(-1, n))
    conc = all(H[k] == 0 for k in range(-1, n) if k != n - 1)
    module = None
    if with_module:
        top = n - 1
        basis = la.nullspace_mod_p(C.boundary(top).toarray(), 2)
        mods = chain_modules(K, 2)
        module = mods[top].restrict_to_subspace(basis)
    return PosetHomology(H, conc, module, K.counts())


def dimension_recursion(n: int) -> int:
    """h_0 = 1, h_1 = 3 and
    h_{n+1} = 3h_n + 2(2^{2n-1} - 2^{n-1}) h_n
              + 2(2^{2n-1} + 2^{n-1} - 1)(2h_n - 2^{2n-1} h_{n-1})."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    h = [1, 3]
    for m in range(1, n):
        a = Fraction(2) ** (2 * m - 1)
        b = Fraction(2) ** (m - 1)
        nxt = 3 * h[m] + 2 * (a - b) * h[m] + 2 * (a + b - 1) * (2 * h[m] - a * h[m - 1])
        h.append(int(nxt))
    return h[n]


def tits_building_homology(n: int) -> PosetHomology:
    P = undecorated_poset(n)
    K = order_complex(P)
    C = reduced_chain_complex(K, 2)
    H = homology_fp(C, 2, range(-1, n))
    conc = all(H[k] == 0 for k in range(-1, n) if k != n - 1)
    return PosetHomology(H, conc, None, K.counts())


def tits_building_rank(n: int) -> int:
    if not 2 <= n <= MAX_WIDTH:
        raise PreconditionError("the building is defined for 2 <= n <= 3")
    return tits_building_homology(n).dims[n - 1]


# ---------------------------------------------------------------------------
# the final assembly


def weyl_order_check(n: int) -> list[tuple[int, int, int]]:
    """Rows (k, |N(H)/H| computed, 2^{2(n-k)+1}) for a decoration H of each dim."""
    E = build_extraspecial(n)
    rows = []
    for k in range(0, n + 1):
        if k == 0:
            H = Subgroup(E.group, 1)
        else:
            U = enumerate_q_isotropic(n, k)[0]
            H = Subgroup(E.group, decorations(E, U)[0].mask)
        W = weyl_group(E.group, H).group
        rows.append((k, W.order, 2 ** (2 * (n - k) + 1)))
    return rows


@lru_cache(maxsize=None)
def _poset_module(m: int) -> GroupModule:
    """H_{m-1} of the decorated poset of V~_m as a V~_m-module (m = 0: trivial)."""
    E = build_extraspecial(m)
    if m == 0:
        return GroupModule.trivial(E.group, 2, 1)
    return decorated_homology(m).module


def final_theorem_rhs(n: int, top: int) -> GradedDims:
    """Degree 0: 1.  Degree i > 0:
    sum_k (classes of decorated U_k) * dim H_{i-n+k-1}(V~_{n-k}; H_{n-k})."""
    if not 0 <= n <= 2:
        raise PreconditionError("full evaluation is available for n <= 2")
    mult = {0: 1}
    if n >= 1:
        mult.update(decoration_orbits(decorated_poset(n)))
    out = {0: 1}
    groups = {}
    for k in range(n + 1):
        m = n - k
        need = top - n + k - 1
        if need < 0:
            continue
        groups[k] = group_homology(build_extraspecial(m).group, _poset_module(m), need)
    for i in range(1, top + 1):
        total = 0
        for k, H in groups.items():
            j = i - n + k - 1
            if j >= 0:
                total += mult.get(k, 0) * H[j]
        out[i] = total
    return GradedDims(out, ring=2)


def gamma_circle(E: ExtraspecialGroup):
    """S(gamma) for V~_1: lifts of v_1 and v_2 act by reflections
    diag(1, -1) and the coordinate swap, so the center acts by -1."""
    from .bredon import dihedral_gamma_circle
    if E.n != 1:
        raise PreconditionError("the circle model is for V~_1")
    gens = [E.lift(E.space.v1(0)), E.lift(E.space.v2(0))]
    return dihedral_gamma_circle(E.group, gens, [[[1, 0], [0, -1]], [[0, 1], [1, 0]]])


def final_theorem_lhs_oracle(n: int, N: int, top: int) -> GradedDims:
    """Reduced Bredon Z/2-homology of the suspension of S(N gamma) for V~_1,
    by the collapse route.  Faithful to the infinite join in degrees <= N."""
    from .bredon import bredon_homology_collapse, join_power_sphere, reduced, suspension
    if n != 1:
        raise PreconditionError("the join oracle is implemented for n = 1")
    if top > N:
        raise PreconditionError(f"degree {top} is outside the stable range <= {N}")
    E = build_extraspecial(1)
    X = suspension(join_power_sphere(E.group, gamma_circle(E), N))
    return reduced(bredon_homology_collapse(X, 2, top)).truncated(0, top)


def iter_rows(n: int) -> Iterator[str]:
    for k, enum, printed in isotropic_counts(n):
        yield f"{k}\t{enum}\t{printed}"
