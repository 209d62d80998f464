"""Presented graded rings of geometric fixed points for (Z/p)^n.

Two descriptions of the same rings are implemented independently:

* :func:`presentation` gives generators and relations, and
  :func:`graded_dim` counts the degree-d part by linear algebra on monomials;
* the *model* realises the generators as fractions inside a localized group
  cohomology ring: ``y_a = 1/x_a`` for p = 2 and ``t_a = 1/z_a``,
  ``u_a = dz_a/z_a`` for odd p.

Degrees are homological: y and u sit in degree 1, t in degree 2.
Nonzero vectors of (Z/p)^n are indexed by the integer with base-p digits
``a_1 + a_2 p + ...``; a line is represented by the vector whose first
nonzero coordinate is 1.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .errors import ConsistencyError, PreconditionError
from .groups import is_prime


# ---------------------------------------------------------------------------
# vectors and lines of (Z/p)^n


def vectors(p: int, n: int) -> list[tuple[int, ...]]:
    """Nonzero vectors in lexicographic order of their coordinate tuples."""
    return [v for v in itertools.product(range(p), repeat=n) if any(v)]


def normalize(v: Sequence[int], p: int) -> tuple[tuple[int, ...], int]:
    """(representative of the line, c) with v = c * representative."""
    lead = next(x for x in v if x % p)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in v), lead % p


def lines(p: int, n: int) -> list[tuple[int, ...]]:
    """Line representatives (first nonzero coordinate 1), sorted."""
    return sorted({normalize(v, p)[0] for v in vectors(p, n)})


def alpha0(n: int) -> tuple[int, ...]:
    return (1,) + (0,) * (n - 1)


def vadd(a, b, p):
    return tuple((x + y) % p for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# presented rings


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    odd: bool         # exterior (anticommuting, squares to zero)
    line: tuple[int, ...]


Monomial = tuple[int, ...]          # exponent per generator


@dataclass
class PresentedGradedRing:
    """Generators (by line) and homogeneous relations over F_p."""

    p: int
    n: int
    form: str
    gens: list[Generator]
    relations: list[dict]
    identifications: list[str] = field(default_factory=list)
    alpha0: tuple[int, ...] = ()

    def gen_index(self, name: str) -> int:
        return next(i for i, g in enumerate(self.gens) if g.name == name)

    def degree(self, m: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(m, self.gens))

    def relation_degrees(self) -> list[int]:
        return [self.degree(next(iter(r))) for r in self.relations]


def _name(prefix: str, v: Sequence[int]) -> str:
    return f"{prefix}[{''.join(map(str, v))}]"


def _mono_mul(R: PresentedGradedRing, a: Monomial, b: Monomial) -> tuple[int, Monomial | None]:
    """Product of monomials: (sign, monomial) or (0, None) when it vanishes."""
    sign = 1
    out = list(a)
    # Koszul sign: move each odd generator of b left past the odd ones of a with larger index
    odd_a = [i for i, e in enumerate(a) if e and R.gens[i].odd]
    for j, e in enumerate(b):
        if not e:
            continue
        g = R.gens[j]
        if g.odd:
            if a[j]:
                return 0, None
            passed = sum(1 for i in odd_a if i > j)
            if passed % 2:
                sign = -sign
        out[j] += e
    return sign, tuple(out)


def elem_mul(R: PresentedGradedRing, x: dict, y: dict) -> dict:
    p = R.p
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            s, m = _mono_mul(R, a, b)
            if s:
                out[m] = (out.get(m, 0) + s * ca * cb) % p
    return {m: c for m, c in out.items() if c}


def elem_add(R: PresentedGradedRing, *xs: dict, coeffs: Sequence[int] | None = None) -> dict:
    p = R.p
    out: dict = {}
    coeffs = coeffs or [1] * len(xs)
    for x, c in zip(xs, coeffs):
        for m, v in x.items():
            out[m] = (out.get(m, 0) + c * v) % p
    return {m: v for m, v in out.items() if v}


def gen_elem(R: PresentedGradedRing, i: int, coeff: int = 1) -> dict:
    if i < 0:
        return {}
    m = [0] * len(R.gens)
    m[i] = 1
    return {tuple(m): coeff % R.p} if coeff % R.p else {}


def one(R: PresentedGradedRing) -> dict:
    return {tuple([0] * len(R.gens)): 1}


def presentation(p: int, n: int, form: str = "modp") -> PresentedGradedRing:
    """The presented ring R_{Z/p} (``form='modp'``) or R_Z (``'integral'``).

    Relations are instantiated over all ordered pairs of nonzero vectors
    (a, b) with a + b nonzero (unordered triples a + b + c = 0 for p = 2),
    rewritten through the generator identifications t_{ca} = c^{-1} t_a and
    u_{ca} = u_a, normalized, and deduplicated.  The distinguished vector a0
    is (1, 0, ..., 0); in the integral form the tilde generator at a0 is zero.
    """
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if n < 1:
        raise PreconditionError("n must be at least 1")
    form = {"mod-p": "modp", "modp": "modp", "integral": "integral", "z": "integral"}.get(form)
    if form is None:
        raise PreconditionError("form is 'modp' or 'integral'")
    L = lines(p, n)
    a0 = alpha0(n)
    if p == 2:
        return _presentation_p2(n, form, L, a0)
    return _presentation_odd(p, n, form, L, a0)


def _normalize_rel(R: PresentedGradedRing, rel: dict) -> dict | None:
    rel = {m: c % R.p for m, c in rel.items() if c % R.p}
    if not rel:
        return None
    lead = min(rel)
    inv = pow(rel[lead], -1, R.p)
    return {m: c * inv % R.p for m, c in rel.items()}


def _dedupe(R: PresentedGradedRing, rels: Iterable[dict]) -> list[dict]:
    seen, out = set(), []
    for r in rels:
        r = _normalize_rel(R, r)
        if r is None:
            continue
        key = tuple(sorted(r.items()))
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def _presentation_p2(n, form, L, a0) -> PresentedGradedRing:
    triples = set()
    for a in L:
        for b in L:
            c = vadd(a, b, 2)
            if a != b and any(c):
                triples.add(tuple(sorted((a, b, c))))
    if form == "modp":
        gens = [Generator(_name("y", v), 1, False, v) for v in L]
        R = PresentedGradedRing(2, n, form, gens, [], alpha0=a0)
        idx = {v: i for i, v in enumerate(L)}
        rels = []
        for a, b, c in sorted(triples):
            ya, yb, yc = (gen_elem(R, idx[v]) for v in (a, b, c))
            rels.append(elem_add(R, elem_mul(R, ya, yb), elem_mul(R, ya, yc), elem_mul(R, yb, yc)))
        R.relations = _dedupe(R, rels)
        return R
    others = [v for v in L if v != a0]
    gens = [Generator(_name("yt", v), 1, False, v) for v in others]
    gens.append(Generator(_name("t", a0), 2, False, a0))
    R = PresentedGradedRing(2, n, form, gens, [], alpha0=a0,
                            identifications=[f"{_name('yt', a0)} = 0"])
    idx = {v: i for i, v in enumerate(others)}
    t = gen_elem(R, len(others))

    def yt(v):
        return gen_elem(R, idx[v]) if v != a0 else {}

    rels = []
    for a, b, c in sorted(triples):
        ya, yb, yc = yt(a), yt(b), yt(c)
        rels.append(elem_add(R, elem_mul(R, ya, yb), elem_mul(R, ya, yc), elem_mul(R, yb, yc), t))
    R.relations = _dedupe(R, rels)
    return R


def _presentation_odd(p, n, form, L, a0) -> PresentedGradedRing:
    integral = form == "integral"
    tgens = [Generator(_name("t", v), 2, False, v) for v in L]
    ulines = [v for v in L if not (integral and v == a0)]
    uname = "ut" if integral else "u"
    ugens = [Generator(_name(uname, v), 1, True, v) for v in ulines]
    gens = tgens + ugens
    ident = ["t[ca] = c^-1 t[a]", f"{uname}[ca] = {uname}[a]"]
    if integral:
        ident.append(f"{_name(uname, a0)} = 0")
    R = PresentedGradedRing(p, n, form, gens, [], identifications=ident, alpha0=a0)
    tidx = {v: i for i, v in enumerate(L)}
    uidx = {v: len(tgens) + i for i, v in enumerate(ulines)}

    def t(v):
        rep, c = normalize(v, p)
        return gen_elem(R, tidx[rep], pow(c, -1, p))

    def u(v):
        rep, _ = normalize(v, p)
        return gen_elem(R, uidx[rep]) if rep in uidx else {}

    rels = []
    vecs = vectors(p, n)
    for a in vecs:
        for b in vecs:
            ab = vadd(a, b, p)
            if not any(ab):
                continue
            m = lambda x, y: elem_mul(R, x, y)
            # t_b t_{a+b} + t_a t_{a+b} - t_a t_b
            rels.append(elem_add(R, m(t(b), t(ab)), m(t(a), t(ab)), m(t(a), t(b)),
                                 coeffs=[1, 1, -1]))
            # t_b u_{a+b} - t_{a+b} u_b + t_{a+b} u_a - u_a t_b
            rels.append(elem_add(R, m(t(b), u(ab)), m(t(ab), u(b)), m(t(ab), u(a)), m(u(a), t(b)),
                                 coeffs=[1, -1, 1, -1]))
            # -u_b u_{a+b} + u_a u_{a+b} - u_a u_b
            rels.append(elem_add(R, m(u(b), u(ab)), m(u(a), u(ab)), m(u(a), u(b)),
                                 coeffs=[-1, 1, -1]))
    R.relations = _dedupe(R, rels)
    return R


@lru_cache(maxsize=None)
def _monomials_cached(key, d: int) -> tuple[Monomial, ...]:
    degs, odd = key
    out: list[Monomial] = []
    k = len(degs)

    def rec(i, remaining, cur):
        if i == k:
            if remaining == 0:
                out.append(tuple(cur))
            return
        top = 1 if odd[i] else remaining // degs[i]
        for e in range(top + 1):
            if e * degs[i] > remaining:
                break
            cur.append(e)
            rec(i + 1, remaining - e * degs[i], cur)
            cur.pop()

    rec(0, d, [])
    return tuple(sorted(out))


def monomials(R: PresentedGradedRing, d: int) -> list[Monomial]:
    if d < 0:
        return []
    key = (tuple(g.degree for g in R.gens), tuple(g.odd for g in R.gens))
    return list(_monomials_cached(key, d))


def _relation_rows(R: PresentedGradedRing, d: int, index: dict) -> list[np.ndarray]:
    rows = []
    for r in R.relations:
        rd = R.degree(next(iter(r)))
        for m in monomials(R, d - rd):
            prod = elem_mul(R, {m: 1}, r)
            if prod:
                v = np.zeros(len(index), dtype=np.int64)
                for mm, c in prod.items():
                    v[index[mm]] = c
                rows.append(v)
    return rows


def _rank(rows: Sequence[np.ndarray], ncols: int, p: int) -> int:
    if not rows or ncols == 0:
        return 0
    return la.rank_mod_p(np.array(rows, dtype=np.int64).reshape(len(rows), ncols), p)


def graded_dim(R: PresentedGradedRing, d: int) -> int:
    """dim_F_p of the degree-d part: monomials modulo (monomial x relation)."""
    mons = monomials(R, d)
    index = {m: i for i, m in enumerate(mons)}
    return len(mons) - _rank(_relation_rows(R, d, index), len(mons), R.p)


def graded_dims(R: PresentedGradedRing, top: int) -> list[int]:
    return [graded_dim(R, d) for d in range(top + 1)]


# ---------------------------------------------------------------------------
# Poincare series


@dataclass
class PoincareSeries:
    coefficients: list[int]
    factored: str


def _series_mul(a: list[int], b: list[int], top: int) -> list[int]:
    out = [0] * (top + 1)
    for i, x in enumerate(a[:top + 1]):
        if x:
            for j, y in enumerate(b[:top + 1 - i]):
                out[i + j] += x * y
    return out


def _inv_one_minus(k: int, top: int) -> list[int]:
    """Coefficients of 1/(1 - x^k)."""
    return [1 if i % k == 0 else 0 for i in range(top + 1)]


def poincare_mod_p(p: int, n: int, top: int) -> PoincareSeries:
    """(1/(1-x)^n) * prod_{i=1..n} (1 + (p^{i-1} - 1) x), expanded."""
    s = [1] + [0] * top
    factors = []
    for i in range(1, n + 1):
        c = p ** (i - 1) - 1
        s = _series_mul(s, [1, c], top)
        if c:
            factors.append(f"(1+{c}x)")
        s = _series_mul(s, _inv_one_minus(1, top), top)
    text = "".join(factors) + f"/(1-x)^{n}" if factors else f"1/(1-x)^{n}"
    return PoincareSeries(s, text)


def poincare_integral(p: int, n: int, top: int) -> PoincareSeries:
    """P(R_Z/p)/(1+x) = prod(1 + (p^{i-1}-1)x) / ((1-x^2)(1-x)^{n-1})."""
    s = [1] + [0] * top
    factors = []
    for i in range(1, n + 1):
        c = p ** (i - 1) - 1
        s = _series_mul(s, [1, c], top)
        if c:
            factors.append(f"(1+{c}x)")
    for _ in range(n - 1):
        s = _series_mul(s, _inv_one_minus(1, top), top)
    s = _series_mul(s, _inv_one_minus(2, top), top)
    num = "".join(factors) or "1"
    return PoincareSeries(s, f"{num}/((1-x^2)(1-x)^{n - 1})")


# ---------------------------------------------------------------------------
# the localized cohomology model


def _hom_monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree k in n variables, lexicographically."""
    out = []

    def rec(i, rem, cur):
        if i == n - 1:
            out.append(tuple(cur + [rem]))
            return
        for e in range(rem + 1):
            rec(i + 1, rem - e, cur + [e])

    rec(0, k, [])
    return sorted(out)


class _PolySpace:
    """Dense homogeneous polynomials over F_p, with shift tables."""

    def __init__(self, n: int, p: int):
        self.n, self.p = n, p
        self._basis: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        self._shift: dict[int, list[np.ndarray]] = {}

    def basis(self, k):
        if k not in self._basis:
            b = _hom_monomials(self.n, k)
            self._basis[k] = b
            self._index[k] = {e: i for i, e in enumerate(b)}
        return self._basis[k]

    def size(self, k):
        return len(self.basis(k))

    def shift(self, k):
        """shift[i][j] = index in degree k+1 of (monomial j of degree k) * x_i."""
        if k not in self._shift:
            self.basis(k + 1)
            idx = self._index[k + 1]
            tabs = []
            for i in range(self.n):
                tabs.append(np.array([idx[e[:i] + (e[i] + 1,) + e[i + 1:]] for e in self.basis(k)],
                                     dtype=np.int64))
            self._shift[k] = tabs
        return self._shift[k]

    def mul_linear(self, v: np.ndarray, k: int, form: Sequence[int]) -> np.ndarray:
        out = np.zeros(self.size(k + 1), dtype=np.int64)
        for i, c in enumerate(form):
            if c:
                out[self.shift(k)[i]] += c * v
        return out % self.p


def _wedge_linear(forms: Sequence[Sequence[int]], n: int, p: int) -> dict[int, int]:
    """dz_{f1} ^ dz_{f2} ^ ... as {subset bitmask: coefficient}."""
    cur = {0: 1}
    for f in forms:
        nxt: dict[int, int] = {}
        for mask, c in cur.items():
            for i, a in enumerate(f):
                if not a or mask >> i & 1:
                    continue
                # append dz_i on the right: sign from elements of mask above i
                s = bin(mask >> (i + 1)).count("1")
                sign = -1 if s % 2 else 1
                m2 = mask | (1 << i)
                nxt[m2] = (nxt.get(m2, 0) + sign * c * a) % p
        cur = {m: c for m, c in nxt.items() if c}
    return cur


@dataclass
class ModelElement:
    """A fraction numerator / prod_a L_a^{den[a]} in the localized ring.

    ``num`` maps (z-exponent tuple, exterior bitmask) to a coefficient in
    F_p; the exterior part is absent (mask 0) for p = 2.  ``den`` counts the
    linear forms L_a (x_a or z_a) in the denominator, keyed by line.
    """

    p: int
    n: int
    num: dict
    den: Counter

    def is_zero(self) -> bool:
        return not any(c % self.p for c in self.num.values())

    # homological degree: denominator degree minus numerator degree
    def degree(self) -> int | None:
        degs = set()
        for (e, mask), c in self.num.items():
            if c % self.p:
                w = 1 if self.p == 2 else 2
                cohom = w * sum(e) + bin(mask).count("1")
                degs.add(w * sum(self.den.values()) - cohom)
        if len(degs) > 1:
            raise ConsistencyError("inhomogeneous model element")
        return degs.pop() if degs else None

    def _scaled(self, extra: Counter) -> "ModelElement":
        """Multiply numerator and denominator by prod L_a^{extra[a]}."""
        num = dict(self.num)
        for line, k in extra.items():
            for _ in range(k):
                num = _num_mul_linear(num, line, self.p)
        den = self.den + extra
        return ModelElement(self.p, self.n, num, den)

    def __add__(self, other: "ModelElement") -> "ModelElement":
        common = self.den | other.den
        a = self._scaled(common - self.den)
        b = other._scaled(common - other.den)
        num = dict(a.num)
        for k, c in b.num.items():
            num[k] = (num.get(k, 0) + c) % self.p
        return ModelElement(self.p, self.n, {k: c for k, c in num.items() if c}, common)

    def __neg__(self) -> "ModelElement":
        return ModelElement(self.p, self.n, {k: -c % self.p for k, c in self.num.items()},
                            Counter(self.den))

    def __sub__(self, other: "ModelElement") -> "ModelElement":
        return self + (-other)

    def scale(self, c: int) -> "ModelElement":
        return ModelElement(self.p, self.n, {k: v * c % self.p for k, v in self.num.items()
                                             if v * c % self.p}, Counter(self.den))

    def __mul__(self, other: "ModelElement") -> "ModelElement":
        p = self.p
        num: dict = {}
        for (e1, m1), c1 in self.num.items():
            for (e2, m2), c2 in other.num.items():
                if m1 & m2:
                    continue
                # sign of moving the dz's of m2 past those of m1 with larger index
                s = 0
                for i in range(self.n):
                    if m2 >> i & 1:
                        s += bin(m1 >> (i + 1)).count("1")
                sign = -1 if s % 2 else 1
                key = (tuple(a + b for a, b in zip(e1, e2)), m1 | m2)
                num[key] = (num.get(key, 0) + sign * c1 * c2) % p
        return ModelElement(p, self.n, {k: c for k, c in num.items() if c}, self.den + other.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelElement):
            return NotImplemented
        return (self - other).is_zero()

    def __pow__(self, k: int) -> "ModelElement":
        out = model_one(self.p, self.n)
        for _ in range(k):
            out = out * self
        return out


def _num_mul_linear(num: dict, line: Sequence[int], p: int) -> dict:
    out: dict = {}
    for (e, mask), c in num.items():
        for i, a in enumerate(line):
            if a:
                e2 = e[:i] + (e[i] + 1,) + e[i + 1:]
                out[(e2, mask)] = (out.get((e2, mask), 0) + a * c) % p
    return {k: c for k, c in out.items() if c}


def model_one(p: int, n: int) -> ModelElement:
    return ModelElement(p, n, {((0,) * n, 0): 1}, Counter())


def model_linear(p: int, n: int, v: Sequence[int]) -> ModelElement:
    """x_v (p = 2) or z_v (odd p) as a model element."""
    num = {}
    for i, a in enumerate(v):
        if a % p:
            e = tuple(int(j == i) for j in range(n))
            num[(e, 0)] = a % p
    return ModelElement(p, n, num, Counter())


def model_element(p: int, n: int, symbol: str, v: Sequence[int]) -> ModelElement:
    """Model image of a generator: symbol in {'y', 't', 'u'} at vector v."""
    v = tuple(int(x) % p for x in v)
    if not any(v):
        raise PreconditionError("generators are indexed by nonzero vectors")
    rep, c = normalize(v, p)
    if symbol == "y":
        if p != 2:
            raise PreconditionError("y generators exist for p = 2 only")
        return ModelElement(p, n, {((0,) * n, 0): 1}, Counter({rep: 1}))
    if p == 2:
        raise PreconditionError("t and u generators are for odd p")
    if symbol == "t":
        # 1/z_v = c^{-1} / z_rep
        return ModelElement(p, n, {((0,) * n, 0): pow(c, -1, p)}, Counter({rep: 1}))
    if symbol == "u":
        # dz_v / z_v = dz_rep / z_rep
        num = {((0,) * n, 1 << i): a for i, a in enumerate(rep) if a}
        return ModelElement(p, n, num, Counter({rep: 1}))
    raise PreconditionError(f"unknown generator symbol {symbol!r}")


def model_bockstein(x: ModelElement) -> ModelElement:
    """Bockstein in the model.

    p = 2: beta(x_i) = x_i^2, so beta(1/x_a) = 1, and
    beta(N / prod x_a^{e_a}) = (beta N + N * sum e_a x_a) / prod x_a^{e_a}.
    odd p: beta(dz_i) = z_i, beta(z_i) = 0, so beta(N / D) = beta(N) / D.
    """
    p, n = x.p, x.n
    num: dict = {}
    if p == 2:
        for (e, mask), c in x.num.items():
            # beta of a monomial prod x_i^{e_i}: sum e_i x_i * (monomial)
            for i in range(n):
                if e[i] % 2:
                    e2 = e[:i] + (e[i] + 1,) + e[i + 1:]
                    num[(e2, 0)] = (num.get((e2, 0), 0) + c) % 2
        extra: dict = {}
        for line, k in x.den.items():
            if k % 2:
                extra = _merge(extra, _num_mul_linear(x.num, line, 2), 2)
        num = _merge(num, extra, 2)
        return ModelElement(p, n, num, Counter(x.den))
    for (e, mask), c in x.num.items():
        bitsset = [i for i in range(n) if mask >> i & 1]
        for j, i in enumerate(bitsset):
            sign = -1 if j % 2 else 1
            e2 = e[:i] + (e[i] + 1,) + e[i + 1:]
            key = (e2, mask & ~(1 << i))
            num[key] = (num.get(key, 0) + sign * c) % p
    return ModelElement(p, n, {k: v for k, v in num.items() if v}, Counter(x.den))


def _merge(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = (out.get(k, 0) + c) % p
    return {k: c for k, c in out.items() if c}


def generator_images(R: PresentedGradedRing) -> list[ModelElement]:
    """Model images of the generators of R (either form)."""
    p, n = R.p, R.n
    out = []
    a0 = R.alpha0
    for g in R.gens:
        kind = g.name.split("[")[0]
        v = g.line
        if kind == "y":
            out.append(model_element(p, n, "y", v))
        elif kind == "t" and p == 2:
            out.append(model_element(p, n, "y", a0) ** 2)
        elif kind == "t":
            out.append(model_element(p, n, "t", v))
        elif kind == "u":
            out.append(model_element(p, n, "u", v))
        elif kind == "yt":
            out.append(model_element(p, n, "y", v) - model_element(p, n, "y", a0))
        elif kind == "ut":
            out.append(model_element(p, n, "u", v) - model_element(p, n, "u", a0))
        else:
            raise ConsistencyError(f"unknown generator {g.name}")
    return out


def evaluate_in_model(R: PresentedGradedRing, x: dict, images: list[ModelElement] | None = None
                      ) -> ModelElement:
    images = generator_images(R) if images is None else images
    total = ModelElement(R.p, R.n, {}, Counter())
    for m, c in sorted(x.items()):
        term = model_one(R.p, R.n)
        for i, e in enumerate(m):
            for _ in range(e):
                term = term * images[i]
        total = total + term.scale(c)
    return total


def model_rank(R: PresentedGradedRing, d: int) -> int:
    """Rank of the degree-d monomials of R (mod-p form) inside the model.

    All monomials are put over the common denominator prod_a L_a^{m_a},
    m_a the largest exponent of L_a occurring; the numerators are products
    of linear forms, built by a depth-first walk that shares prefixes.
    """
    if R.form != "modp":
        raise PreconditionError("model_rank works on the mod-p presentation")
    p, n = R.p, R.n
    mons = monomials(R, d)
    if not mons:
        return 0
    L = lines(p, n)
    k = len(L)
    # denominator exponent of line j in monomial m
    if p == 2:
        dens = [list(m) for m in mons]
        ext = [[] for _ in mons]
    else:
        dens, ext = [], []
        for m in mons:
            dens.append([m[j] + m[k + j] for j in range(k)])
            ext.append([L[j] for j in range(k) if m[k + j]])
    top = [max(dd[j] for dd in dens) for j in range(k)]
    space = _PolySpace(n, p)
    # group monomials by numerator multiplier exponents (top - den)
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, dd in enumerate(dens):
        groups.setdefault(tuple(t - e for t, e in zip(top, dd)), []).append(i)
    numer: dict[tuple[int, ...], np.ndarray] = {}
    deg_of: dict[tuple[int, ...], int] = {}

    # depth-first over lines with prefix sharing
    keys = sorted(groups)
    cache: dict[tuple, tuple[np.ndarray, int]] = {(): (np.ones(1, dtype=np.int64), 0)}
    for key in keys:
        # longest cached prefix
        j = len(key)
        while key[:j] not in cache:
            j -= 1
        v, deg = cache[key[:j]]
        for i in range(j, len(key)):
            for _ in range(key[i]):
                v = space.mul_linear(v, deg, L[i])
                deg += 1
            cache[key[:i + 1]] = (v, deg)
        numer[key], deg_of[key] = v, deg
    # assemble vectors, one block per exterior degree
    blocks: dict[int, list[np.ndarray]] = {}
    for key, idxs in groups.items():
        base, deg = numer[key], deg_of[key]
        for i in idxs:
            w = _wedge_linear(ext[i], n, p) if ext[i] else {0: 1}
            b = len(ext[i])
            masks = [m for m in range(1 << n) if bin(m).count("1") == b]
            mpos = {m: t for t, m in enumerate(masks)}
            vec = np.zeros((len(base), len(masks)), dtype=np.int64)
            for mask, c in w.items():
                vec[:, mpos[mask]] = base * c % p
            blocks.setdefault((b, deg), []).append(vec.ravel())
    return sum(_rank(rows, len(rows[0]), p) for rows in blocks.values())


@dataclass
class CheckReport:
    name: str
    passed: bool
    rows: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}\t{self.name}"


def verify_presentation_in_model(p: int, n: int, top: int) -> CheckReport:
    """(i) every relation vanishes in the model; (ii) per degree, the model
    rank of the monomials equals graded_dim and the series coefficient."""
    R = presentation(p, n, "modp")
    images = generator_images(R)
    bad = [r for r in R.relations if not evaluate_in_model(R, r, images).is_zero()]
    series = poincare_mod_p(p, n, top).coefficients
    rows = []
    ok = not bad
    for d in range(top + 1):
        gd, mr = graded_dim(R, d), model_rank(R, d)
        rows.append((d, gd, series[d], mr))
        ok &= gd == mr == series[d]
    rep = CheckReport(f"presentation/model/series p={p} n={n} D={top}", ok, rows)
    if bad:
        rep.notes.append(f"{len(bad)} relations do not vanish in the model")
    return rep


# ---------------------------------------------------------------------------
# Bockstein on the presented ring


def bockstein(R: PresentedGradedRing, x: dict) -> dict:
    """Graded derivation with beta(t) = 0 and beta(u) = beta(y) = 1.

    beta(ab) = beta(a) b + (-1)^{|a|} a beta(b).  For p = 2 the value
    beta(y_a) = 1 follows in the model from beta(x_a) = x_a^2 and
    beta(x_a y_a) = 0.  In the integral form beta(yt) = 0 and beta(t) = 0.
    """
    p = R.p
    out: dict = {}
    for m, c in x.items():
        # walk generators in order; sign from the degree of the prefix
        prefix_deg = 0
        for i, e in enumerate(m):
            g = R.gens[i]
            if not e:
                continue
            kind = g.name.split("[")[0]
            if kind in ("y", "u"):
                # beta(g^e) = e g^{e-1} for even use (p=2) and beta(u) = 1
                coeff = e if kind == "y" else 1
                sign = -1 if prefix_deg % 2 else 1
                m2 = list(m)
                m2[i] -= 1
                m2 = tuple(m2)
                out[m2] = (out.get(m2, 0) + sign * coeff * c) % p
            prefix_deg += e * g.degree
    return {m: c for m, c in out.items() if c}


def bockstein_ranks(R: PresentedGradedRing, top: int) -> dict[int, int]:
    """rank of beta : R_d -> R_{d-1} on the quotient, for d = 0..top."""
    out = {0: 0}
    for d in range(1, top + 1):
        src = monomials(R, d)
        tgt = monomials(R, d - 1)
        tidx = {m: i for i, m in enumerate(tgt)}
        rel = _relation_rows(R, d - 1, tidx)
        imgs = []
        for m in src:
            b = bockstein(R, {m: 1})
            v = np.zeros(len(tgt), dtype=np.int64)
            for mm, c in b.items():
                v[tidx[mm]] = c
            imgs.append(v)
        out[d] = _rank(rel + imgs, len(tgt), R.p) - _rank(rel, len(tgt), R.p)
    return out


def bockstein_kernel_dims(p: int, n: int, top: int) -> list[int]:
    R = presentation(p, n, "modp")
    ranks = bockstein_ranks(R, top)
    return [graded_dim(R, d) - ranks[d] for d in range(top + 1)]


def bockstein_well_defined(R: PresentedGradedRing, top: int) -> bool:
    """beta maps the relation span of each degree <= top into the relation span."""
    for d in range(1, top + 1):
        tgt = monomials(R, d - 1)
        tidx = {m: i for i, m in enumerate(tgt)}
        rel = _relation_rows(R, d - 1, tidx)
        base = _rank(rel, len(tgt), R.p)
        for r in R.relations:
            rd = R.degree(next(iter(r)))
            for m in monomials(R, d - rd):
                b = bockstein(R, elem_mul(R, {m: 1}, r))
                if not b:
                    continue
                v = np.zeros(len(tgt), dtype=np.int64)
                for mm, c in b.items():
                    v[tidx[mm]] = c
                if _rank(rel + [v], len(tgt), R.p) != base:
                    return False
    return True


def bockstein_squares_zero(R: PresentedGradedRing, top: int) -> bool:
    for d in range(top + 1):
        for m in monomials(R, d):
            if bockstein(R, bockstein(R, {m: 1})):
                return False
    return True


def bockstein_homology_check(p: int, n: int, top: int) -> CheckReport:
    """beta well defined, beta^2 = 0, and ker/im = 0 in degrees 0..top-1."""
    R = presentation(p, n, "modp")
    ranks = bockstein_ranks(R, top)
    dims = [graded_dim(R, d) for d in range(top + 1)]
    rows, ok = [], True
    for d in range(top):
        ker = dims[d] - ranks[d]
        im = ranks[d + 1]
        rows.append((d, ker, im))
        ok &= ker == im
    wd = bockstein_well_defined(R, top)
    sq = bockstein_squares_zero(R, top)
    rep = CheckReport(f"bockstein p={p} n={n} D={top}", ok and wd and sq, rows)
    rep.notes.append(f"well-defined on relations: {wd}; beta^2 = 0: {sq}")
    if p == 2:
        rep.notes.append("beta(y_a) = 1 derived in the model from beta(x_a) = x_a^2")
    return rep


def integral_presentation_check(p: int, n: int, top: int) -> CheckReport:
    """graded_dim(integral form) = ker beta dims = integral series, and the
    integral generators map into ker beta with their relations vanishing."""
    RZ = presentation(p, n, "integral")
    Rp = presentation(p, n, "modp")
    series = poincare_integral(p, n, top).coefficients
    kdims = bockstein_kernel_dims(p, n, top)
    rows, ok = [], True
    for d in range(top + 1):
        g = graded_dim(RZ, d)
        rows.append((d, g, kdims[d], series[d]))
        ok &= g == kdims[d] == series[d]
    images = generator_images(RZ)
    in_kernel = all(model_bockstein(x).is_zero() for x in images)
    rel_zero = all(evaluate_in_model(RZ, r, images).is_zero() for r in RZ.relations)
    # the relations also hold in the presented ring R_{Z/p}
    rel_in_Rp = all(_in_relation_span(Rp, integral_to_modp(RZ, Rp, r)) for r in RZ.relations)
    rep = CheckReport(f"integral presentation p={p} n={n} D={top}",
                      ok and in_kernel and rel_zero and rel_in_Rp, rows)
    rep.notes.append(f"images in ker beta: {in_kernel}; relations vanish in model: {rel_zero}; "
                     f"relations vanish in R_Z/p: {rel_in_Rp}")
    return rep


def integral_to_modp(RZ: PresentedGradedRing, Rp: PresentedGradedRing, x: dict) -> dict:
    """Image of an integral-form element in R_{Z/p} under yt -> y - y0,
    t0 -> y0^2 (p = 2) or ut -> u - u0, t -> t (odd p)."""
    p = Rp.p
    a0 = Rp.alpha0
    imgs = []
    for g in RZ.gens:
        kind = g.name.split("[")[0]
        if kind == "yt":
            imgs.append(elem_add(Rp, gen_elem(Rp, Rp.gen_index(_name("y", g.line))),
                                 gen_elem(Rp, Rp.gen_index(_name("y", a0))), coeffs=[1, -1]))
        elif kind == "t" and p == 2:
            y0 = gen_elem(Rp, Rp.gen_index(_name("y", a0)))
            imgs.append(elem_mul(Rp, y0, y0))
        elif kind == "t":
            imgs.append(gen_elem(Rp, Rp.gen_index(_name("t", g.line))))
        elif kind == "ut":
            imgs.append(elem_add(Rp, gen_elem(Rp, Rp.gen_index(_name("u", g.line))),
                                 gen_elem(Rp, Rp.gen_index(_name("u", a0))), coeffs=[1, -1]))
    out: dict = {}
    for m, c in x.items():
        term = one(Rp)
        for i, e in enumerate(m):
            for _ in range(e):
                term = elem_mul(Rp, term, imgs[i])
        out = elem_add(Rp, out, term, coeffs=[1, c])
    return out


def _in_relation_span(R: PresentedGradedRing, x: dict) -> bool:
    if not x:
        return True
    d = R.degree(next(iter(x)))
    mons = monomials(R, d)
    idx = {m: i for i, m in enumerate(mons)}
    rel = _relation_rows(R, d, idx)
    v = np.zeros(len(mons), dtype=np.int64)
    for m, c in x.items():
        v[idx[m]] = c
    return _rank(rel + [v], len(mons), R.p) == _rank(rel, len(mons), R.p)


def integral_image_rank(p: int, n: int, d: int) -> int:
    """Rank of the degree-d monomials of the integral form after mapping
    them into R_{Z/p}: the integral form's model-side dimension."""
    RZ, Rp = presentation(p, n, "integral"), presentation(p, n, "modp")
    mons = monomials(Rp, d)
    idx = {m: i for i, m in enumerate(mons)}
    rel = _relation_rows(Rp, d, idx)
    imgs = []
    for m in monomials(RZ, d):
        x = integral_to_modp(RZ, Rp, {m: 1})
        v = np.zeros(len(mons), dtype=np.int64)
        for mm, c in x.items():
            v[idx[mm]] = c
        imgs.append(v)
    return _rank(rel + imgs, len(mons), p) - _rank(rel, len(mons), p)
