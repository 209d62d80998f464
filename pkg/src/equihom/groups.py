"""Finite groups as multiplication tables.

A :class:`FiniteGroup` is a closed multiplication table on the element
indices ``0..order-1``.  Subgroups are bitmasks over those indices, so they
hash cheaply and set operations are integer operations.  Everything derived
(normalizers, quotients, Weyl groups, Frattini subgroups, families) is
computed from the table by brute force, which is exact and fast enough for
the orders we care about (at most 256).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from . import caps
from .errors import DomainError, ParseError, PreconditionError


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def is_prime_power(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


class FiniteGroup:
    """A group given by its multiplication table.

    ``mult[i, j] = k`` means ``e_i * e_j = e_k``.  The table is validated on
    construction (closure, identity, inverses, associativity).
    """

    def __init__(self, mult, identity: int = 0, labels: Sequence[str] | None = None,
                 name: str = "", validate: bool = True):
        mult = np.asarray(mult, dtype=np.int64)
        if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
            raise PreconditionError("multiplication table must be a nonempty square array")
        n = mult.shape[0]
        caps.check("MAX_GROUP_ORDER", caps.MAX_GROUP_ORDER, n)
        self.mult = mult
        self.mult.setflags(write=False)
        self.order = n
        self.identity = int(identity)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.name = name
        if validate:
            self._validate()
        inv = np.empty(n, dtype=np.int64)
        for g in range(n):
            inv[g] = int(np.flatnonzero(mult[g] == self.identity)[0])
        self.inv = inv
        self.inv.setflags(write=False)

    def _validate(self) -> None:
        M, n, e = self.mult, self.order, self.identity
        if M.min() < 0 or M.max() >= n:
            raise PreconditionError("table entries out of range")
        idx = np.arange(n)
        if not (np.array_equal(M[e], idx) and np.array_equal(M[:, e], idx)):
            raise PreconditionError(f"element {e} is not a two-sided identity")
        for g in range(n):
            if len(set(M[g].tolist())) != n or len(set(M[:, g].tolist())) != n:
                raise PreconditionError(f"row/column {g} is not a permutation (no inverse)")
        # (ab)c == a(bc) for all a, b, c
        left = M[M, :]          # left[a, b, c] = (ab)c
        right = M[:, M]         # right[a, b, c] = a(bc)
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            raise PreconditionError("table is not associative at (%d, %d, %d)" % tuple(bad))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def power(self, g: int, k: int) -> int:
        x = self.identity
        for _ in range(k):
            x = int(self.mult[x, g])
        return x

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = int(self.mult[x, g])
            k += 1
        return k

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, h] = g h g^{-1}``."""
        M = self.mult
        gh = M                                   # gh[g, h] = g h
        return M[gh, self.inv[:, None]]          # (g h) g^{-1}

    def commutator(self, a: int, b: int) -> int:
        M, inv = self.mult, self.inv
        return int(M[M[M[a, b], inv[a]], inv[b]])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.T))

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1)

    @property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1 << self.identity)

    def is_p_group(self, p: int | None = None) -> bool:
        if self.order == 1:
            return True
        ps = prime_factors(self.order)
        return len(ps) == 1 and (p is None or ps[0] == p)

    def prime(self) -> int | None:
        """The prime p if this is a nontrivial p-group."""
        ps = prime_factors(self.order)
        return ps[0] if len(ps) == 1 else None

    @classmethod
    def from_generators(cls, gens: Sequence[Hashable], mul: Callable, name: str = "",
                        label: Callable[[Hashable], str] = str) -> "FiniteGroup":
        """Close a set of hashable generators under ``mul``.

        Elements are numbered in breadth-first order, identity first.
        """
        gens = list(gens)
        g0 = gens[0]
        # identity: g^k for k = order(g0)
        x = g0
        powers = [x]
        while True:
            y = mul(x, g0)
            if y == g0:
                e = x
                break
            x = y
            powers.append(x)
            caps.check("MAX_GROUP_ORDER", caps.MAX_GROUP_ORDER, len(powers))
        elements = [e]
        index = {e: 0}
        frontier = [e]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = mul(a, g)
                    if b not in index:
                        index[b] = len(elements)
                        elements.append(b)
                        nxt.append(b)
                        caps.check("MAX_GROUP_ORDER", caps.MAX_GROUP_ORDER, len(elements))
            frontier = nxt
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                table[i, j] = index[mul(a, b)]
        grp = cls(table, 0, [label(x) for x in elements], name=name)
        grp.elements = elements
        return grp


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``group`` stored as a membership bitmask."""

    group: FiniteGroup = field(compare=False, hash=False, repr=False)
    mask: int

    @property
    def order(self) -> int:
        return popcount(self.mask)

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: "Subgroup") -> bool:
        return self.mask != other.mask and self <= other

    def elements(self) -> list[int]:
        return list(bits(self.mask))

    def is_closed(self) -> bool:
        G = self.group
        els = self.elements()
        if not self.mask >> G.identity & 1:
            return False
        for a in els:
            if not self.mask >> int(G.inv[a]) & 1:
                return False
            for b in els:
                if not self.mask >> int(G.mult[a, b]) & 1:
                    return False
        return True

    def conjugate(self, g: int) -> "Subgroup":
        row = self.group.conj[g]
        m = 0
        for h in bits(self.mask):
            m |= 1 << int(row[h])
        return Subgroup(self.group, m)

    def sort_key(self):
        return (self.order, self.mask)

    def __repr__(self) -> str:
        els = ",".join(self.group.labels[i] for i in self.elements())
        return f"<{els}>" if self.order <= 8 else f"Subgroup(order={self.order})"


def closure(G: FiniteGroup, gens: Iterable[int], base: int = 0) -> Subgroup:
    """Subgroup generated by ``gens`` together with the subgroup mask ``base``."""
    gens = [int(g) for g in gens] + list(bits(base))
    mask = 1 << G.identity
    frontier = [G.identity]
    M = G.mult
    gens = list(dict.fromkeys(gens))
    while frontier:
        nxt = []
        for a in frontier:
            row = M[a]
            for g in gens:
                b = int(row[g])
                if not mask >> b & 1:
                    mask |= 1 << b
                    nxt.append(b)
        frontier = nxt
    return Subgroup(G, mask)


def cyclic_subgroup(G: FiniteGroup, g: int) -> Subgroup:
    return closure(G, [g])


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All subgroups of G, sorted by (order, mask).

    Breadth-first closure: start from the cyclic subgroups and repeatedly join
    a known subgroup with a cyclic one.  Every subgroup is a join of cyclic
    subgroups, so this terminates with the complete list.  Cost is roughly
    (#subgroups) x (#cyclic subgroups) x |G|.
    """
    cache = getattr(G, "_subgroups", None)
    if cache is not None:
        return cache
    cyclic: dict[int, int] = {}
    for g in range(G.order):
        c = cyclic_subgroup(G, g).mask
        cyclic.setdefault(c, g)
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C, g in cyclic.items():
                if C & H == C:
                    continue
                J = closure(G, [g], base=H).mask
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    out = sorted((Subgroup(G, m) for m in found), key=Subgroup.sort_key)
    G._subgroups = out
    return out


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    mask = 0
    for g in range(G.order):
        if H.conjugate(g).mask == H.mask:
            mask |= 1 << g
    return Subgroup(G, mask)


def is_normal(G: FiniteGroup, H: Subgroup, within: Subgroup | None = None) -> bool:
    ks = within if within is not None else G.whole
    return all(H.conjugate(g).mask == H.mask for g in ks)


def conjugacy_classes_of_subgroups(G: FiniteGroup, subgroups: Sequence[Subgroup] | None = None
                                   ) -> list[tuple[Subgroup, int]]:
    """Pairs (representative, class size); representative = least (order, mask)."""
    subs = all_subgroups(G) if subgroups is None else sorted(subgroups, key=Subgroup.sort_key)
    seen: set[int] = set()
    out = []
    for H in subs:
        if H.mask in seen:
            continue
        cls = {H.conjugate(g).mask for g in range(G.order)}
        seen |= cls
        out.append((H, len(cls)))
    return out


def conjugacy_class_of(G: FiniteGroup, H: Subgroup) -> list[Subgroup]:
    masks = sorted({H.conjugate(g).mask for g in range(G.order)})
    return [Subgroup(G, m) for m in masks]


@dataclass
class Quotient:
    """A quotient K/N with its projection.

    ``projection[g]`` is the quotient element of ``gN`` for g in K and -1
    outside K; ``lifts[i]`` is the least element index of coset i.
    """

    group: FiniteGroup
    projection: np.ndarray
    lifts: list[int]
    kernel: Subgroup
    ambient: Subgroup


def quotient(G: FiniteGroup, N: Subgroup, K: Subgroup | None = None) -> Quotient:
    """K/N for N normal in K (K defaults to G).

    Cosets are numbered by their least element index, so tables are
    deterministic.
    """
    K = G.whole if K is None else K
    if not N <= K:
        raise PreconditionError("N must be contained in K")
    if not is_normal(G, N, within=K):
        raise PreconditionError("N is not normal in K")
    proj = -np.ones(G.order, dtype=np.int64)
    cosets: list[int] = []
    for k in sorted(K):
        if proj[k] >= 0:
            continue
        i = len(cosets)
        cosets.append(k)
        for n_ in N:
            proj[int(G.mult[k, n_])] = i
    m = len(cosets)
    table = np.empty((m, m), dtype=np.int64)
    for i, a in enumerate(cosets):
        for j, b in enumerate(cosets):
            table[i, j] = proj[int(G.mult[a, b])]
    labels = [G.labels[c] + "N" if N.order > 1 else G.labels[c] for c in cosets]
    Q = FiniteGroup(table, int(proj[G.identity]), labels, name=f"{G.name}/N" if G.name else "")
    return Quotient(Q, proj, cosets, N, K)


def weyl_group(G: FiniteGroup, H: Subgroup) -> Quotient:
    """W(H) = N(H)/H with the quotient map recorded."""
    return quotient(G, H, normalizer(G, H))


def frattini_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """Subgroup generated by all commutators and all p-th powers."""
    gens = set()
    for a in range(G.order):
        gens.add(G.power(a, p))
        for b in range(G.order):
            gens.add(G.commutator(a, b))
    return closure(G, sorted(gens))


def generating_set(G: FiniteGroup, H: Subgroup | None = None) -> list[int]:
    """A small generating set of H (greedy; minimal for p-groups)."""
    H = G.whole if H is None else H
    gens: list[int] = []
    cur = G.trivial
    # prefer elements of large order first for short lists
    for g in sorted(H, key=lambda x: (-G.element_order(x), x)):
        if g not in cur:
            gens.append(g)
            cur = closure(G, gens)
            if cur.mask == H.mask:
                break
    return gens


def maximal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    subs = [H for H in all_subgroups(G) if H.mask != G.whole.mask]
    return [H for H in subs if not any(H < K for K in subs)]


def sylow_subgroups(G: FiniteGroup, p: int) -> list[Subgroup]:
    n, q = G.order, 1
    while n % p == 0:
        n //= p
        q *= p
    return [H for H in all_subgroups(G) if H.order == q]


def vanishing_witnesses(G: FiniteGroup) -> list[tuple[int, Subgroup, int]]:
    """Triples (prime, H, [G:H]) with H maximal among proper subgroups and
    containing a Sylow subgroup for that prime.

    For such H the degree-0 class of ``E^1_{1,0}`` maps to +-[G:H] in
    ``E^1_{0,0} = Z``.
    """
    out = []
    maxes = maximal_subgroups(G)
    for p in prime_factors(G.order):
        sylows = sylow_subgroups(G, p)
        for H in maxes:
            if any(P <= H for P in sylows):
                out.append((p, H, G.order // H.order))
    return out


def non_pgroup_vanishing_certificate(G: FiniteGroup) -> int:
    """gcd of the indices |G|/|H| from :func:`vanishing_witnesses`.

    A value of 1 means the unit of the degree-0 integral E^1 term is hit by a
    d^1 combination, so the geometric fixed points vanish.  For a p-group no
    proper subgroup contains a Sylow subgroup; there the gcd is taken over
    all maximal subgroups instead, which all have index p, so the value is p.
    The trivial group has no maximal subgroups and gets 0.
    """
    wit = vanishing_witnesses(G)
    if wit:
        return gcd_of(idx for _, _, idx in wit)
    return gcd_of(G.order // H.order for H in maximal_subgroups(G))


def gcd_of(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


# ---------------------------------------------------------------------------
# families and heights


class Family:
    """A family of subgroups: closed under subgroups and conjugation."""

    def __init__(self, group: FiniteGroup, members: Iterable[Subgroup], validate: bool = True,
                 name: str = ""):
        self.group = group
        self.members = frozenset(members)
        self.name = name
        self._heights: dict[int, int] = {}
        if validate:
            self.validate()

    def __contains__(self, H: Subgroup) -> bool:
        return H in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subgroup]:
        return iter(sorted(self.members, key=Subgroup.sort_key))

    def validate(self) -> None:
        G = self.group
        masks = {H.mask for H in self.members}
        for H in self.members:
            for g in range(G.order):
                if H.conjugate(g).mask not in masks:
                    raise PreconditionError(f"family not closed under conjugation at {H!r}")
        subs = all_subgroups(G)
        for H in self.members:
            for K in subs:
                if K <= H and K.mask not in masks:
                    raise PreconditionError(f"family not closed under subgroups: {K!r} <= {H!r}")

    def height(self, H: Subgroup) -> int:
        if H not in self.members:
            raise DomainError(f"{H!r} is not a member of the family")
        h = self._heights.get(H.mask)
        if h is None:
            above = [K for K in self.members if H < K]
            h = 1 + max((self.height(K) for K in above), default=0)
            self._heights[H.mask] = h
        return h

    def max_height(self) -> int:
        return max((self.height(H) for H in self.members), default=0)

    def conjugacy_classes(self) -> list[tuple[Subgroup, int]]:
        return conjugacy_classes_of_subgroups(self.group, list(self.members))


def height(F: Family, H: Subgroup) -> int:
    """h_F(H) = 1 + max(0, h_F(K) for K in F strictly above H)."""
    return F.height(H)


def proper_family(G: FiniteGroup) -> Family:
    """F[G]: all proper subgroups."""
    whole = G.whole.mask
    return Family(G, [H for H in all_subgroups(G) if H.mask != whole], validate=False,
                  name="proper")


def family_from_maximal(G: FiniteGroup, generators: Iterable[Subgroup], name: str = "") -> Family:
    """Smallest family containing the given subgroups."""
    gens = list(generators)
    masks = set()
    for H in gens:
        for g in range(G.order):
            masks.add(H.conjugate(g).mask)
    members = [K for K in all_subgroups(G) if any(K.mask & m == K.mask for m in masks)]
    return Family(G, members, validate=False, name=name)


# ---------------------------------------------------------------------------
# constructors


def _perm_mul(a, b):
    # (a*b)(i) = a(b(i)): apply b first
    return tuple(a[i] for i in b)


def _perm_label(p) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j + 1)
            j = p[j]
        cycles.append("(" + " ".join(map(str, c)) + ")")
    return "".join(cycles) or "()"


def permutation_group(gens: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    return FiniteGroup.from_generators([tuple(g) for g in gens], _perm_mul, name=name,
                                       label=_perm_label)


def abelian(*orders: int) -> FiniteGroup:
    """Direct product Z/n1 x Z/n2 x ...; element index is mixed radix."""
    orders = tuple(int(o) for o in orders) or (1,)
    elements = list(itertools.product(*[range(o) for o in orders]))
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[tuple((x + y) % o for x, y, o in zip(a, b, orders))]
    labels = ["".join(map(str, e)) if len(orders) > 1 else str(e[0]) for e in elements]
    name = " x ".join(f"Z/{o}" for o in orders)
    return FiniteGroup(table, 0, labels, name=name)


def cyclic(n: int) -> FiniteGroup:
    return abelian(n)


def elementary_abelian(p: int, n: int) -> FiniteGroup:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    G = abelian(*([p] * n)) if n > 0 else abelian(1)
    G.name = f"(Z/{p})^{n}"
    return G


def dihedral(m: int) -> FiniteGroup:
    """Dihedral group of order 2m (symmetries of an m-gon); dihedral(4) is D8."""
    r = tuple((i + 1) % m for i in range(m))
    s = tuple((-i) % m for i in range(m))
    G = permutation_group([r, s], name=f"D{2 * m}")
    return G


def quaternion() -> FiniteGroup:
    # elements (sign, unit) with unit in 1,i,j,k
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    def label(x):
        return ("-" if x[0] < 0 else "") + x[1]

    return FiniteGroup.from_generators([(1, "i"), (1, "j")], mul, name="Q8", label=label)


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return abelian(1)
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return permutation_group(gens, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3:
        return abelian(1)
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return permutation_group(gens, name=f"A{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    n, m = G.order, H.order
    Ga = np.repeat(np.asarray(G.mult), m, axis=0).repeat(m, axis=1)
    Hb = np.tile(np.asarray(H.mult), (n, n))
    table = Ga * m + Hb
    labels = [f"({x},{y})" for x in G.labels for y in H.labels]
    return FiniteGroup(table, G.identity * m + H.identity, labels,
                       name=f"{G.name} x {H.name}")


BUILTIN_NAMES = ("trivial", "cyclic", "elementary", "abelian", "dihedral", "quaternion",
                 "symmetric", "alternating", "extraspecial")


def builtin(name: str, *params: int) -> FiniteGroup:
    """Builtin constructors by name.

    ``cyclic n``, ``elementary p n``, ``abelian n1 n2 ...``, ``dihedral 8``
    (the order, i.e. 2m), ``quaternion 8``, ``symmetric 3``, ``alternating 4``,
    ``extraspecial n`` (order 2^(2n+1)), ``trivial``.
    """
    params = [int(x) for x in params]
    key = name.lower()
    if key == "trivial":
        G = abelian(1)
        G.name = "1"
    elif key in ("cyclic", "z"):
        (n,) = params
        G = cyclic(n)
    elif key == "elementary":
        p, n = params
        G = elementary_abelian(p, n)
    elif key == "abelian":
        G = abelian(*params)
    elif key in ("dihedral", "d"):
        (order,) = params or (8,)
        if order % 2:
            raise DomainError("dihedral order must be even")
        G = dihedral(order // 2)
    elif key in ("quaternion", "q"):
        if params and params != [8]:
            raise DomainError("only the quaternion group of order 8 is built in")
        G = quaternion()
    elif key in ("symmetric", "s"):
        (n,) = params or (3,)
        G = symmetric(n)
    elif key in ("alternating", "a"):
        (n,) = params or (4,)
        G = alternating(n)
    elif key == "extraspecial":
        from .extraspecial import build_extraspecial
        (n,) = params
        G = build_extraspecial(n).group
    else:
        raise DomainError(f"unknown builtin group {name!r}")
    return G


def parse_builtin_spec(spec: str) -> FiniteGroup:
    """Parse ``name-params`` (``elementary-2-2``) or ``name params`` forms."""
    parts = spec.replace("-", " ").split()
    if not parts:
        raise ParseError("empty group name")
    try:
        return builtin(parts[0], *parts[1:])
    except (ValueError, TypeError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise ParseError(f"bad builtin group spec {spec!r}: {exc}") from exc


def parse_group_text(text: str) -> FiniteGroup:
    """Parse the one-group-per-file text format.

    Either ``group <order>`` followed by ``mul i j k`` lines (every product
    must be given exactly once), or a single ``builtin <name> <params>`` line.
    Blank lines and ``#`` comments are ignored.
    """
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty group file")
    no, first = lines[0]
    head = first.split()
    if head[0] == "builtin":
        if len(lines) > 1:
            raise ParseError("unexpected content after builtin line", lines[1][0])
        return parse_builtin_spec(" ".join(head[1:]))
    if head[0] != "group" or len(head) != 2:
        raise ParseError("expected 'group <order>' or 'builtin <name> ...'", no, head[0])
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError("order must be an integer", no, head[1]) from None
    if n <= 0:
        raise ParseError("order must be positive", no, head[1])
    caps.check("MAX_GROUP_ORDER", caps.MAX_GROUP_ORDER, n)
    table = -np.ones((n, n), dtype=np.int64)
    for no, ln in lines[1:]:
        tok = ln.split()
        if tok[0] != "mul":
            raise ParseError("expected 'mul i j k'", no, tok[0])
        if len(tok) != 4:
            raise ParseError("'mul' takes exactly three indices", no)
        try:
            i, j, k = (int(t) for t in tok[1:])
        except ValueError:
            bad = next(t for t in tok[1:] if not t.lstrip("-").isdigit())
            raise ParseError("non-integer index", no, bad) from None
        for t in (i, j, k):
            if not 0 <= t < n:
                raise ParseError("index out of range", no, str(t))
        if table[i, j] >= 0:
            raise ParseError(f"product {i}*{j} given twice", no)
        table[i, j] = k
    missing = np.argwhere(table < 0)
    if missing.size:
        i, j = missing[0]
        raise ParseError(f"missing product {i}*{j}")
    ident = [e for e in range(n) if np.array_equal(table[e], np.arange(n))]
    if not ident:
        raise ParseError("table has no identity element")
    return FiniteGroup(table, ident[0])


def format_group_text(G: FiniteGroup) -> str:
    out = [f"group {G.order}"]
    for i in range(G.order):
        for j in range(G.order):
            out.append(f"mul {i} {j} {int(G.mult[i, j])}")
    return "\n".join(out) + "\n"
