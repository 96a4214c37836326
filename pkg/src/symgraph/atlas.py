"""Constructors for the concrete groups used by the graph constructions.

Also holds the searches that pick out subgroups (A5, dihedral subgroups,
Sylow normalizers) and double-coset representatives for coset graphs.
Randomized searches take an explicit seed and are reproducible.
"""

from __future__ import annotations

from itertools import product
from math import gcd
from typing import Callable, Sequence

import numpy as np

from .cosets import CosetSpace
from .exceptions import NotAMemberError, PreconditionError, SearchExhaustedError
from .fields import field, prime_power
from .perm import (
    DEFAULT_ENUM_BOUND,
    Permutation,
    PermGroup,
    _INDEX,
    centralizer_of_element,
    direct_product,
    element_orders,
)
from .presentation import Presentation, coset_enumeration, word_permutation

DEFAULT_SEED = 20170213


class RegularGroup(PermGroup):
    """A group acting regularly, with point ``0`` standing for the identity.

    Point ``p`` is identified with the unique element mapping ``0`` to ``p``;
    the generators act by right multiplication.
    """

    def __init__(self, generators, degree=None, name=None, presentation=None):
        super().__init__(generators, degree, name)
        self.presentation = presentation
        self._elements: np.ndarray | None = None

    def _element_table(self) -> np.ndarray:
        if self._elements is None:
            reps = np.empty((self.degree, self.degree), dtype=_INDEX)
            reps[0] = np.arange(self.degree)
            seen = np.zeros(self.degree, dtype=bool)
            seen[0] = True
            queue = [0]
            for p in queue:
                for g in self.generators:
                    q = int(g.array[p])
                    if not seen[q]:
                        seen[q] = True
                        reps[q] = g.array[reps[p]]
                        queue.append(q)
            if not seen.all():
                raise PreconditionError("group is not transitive, so not regular")
            self._elements = reps
        return self._elements

    def element_at(self, point: int) -> Permutation:
        return Permutation._wrap(self._element_table()[point])

    def point_of(self, x: Permutation) -> int:
        return x(0)

    def word(self, text: str) -> Permutation:
        """Evaluate a word written with the presentation's generator names."""
        if self.presentation is None:
            raise ValueError("group has no presentation")
        return word_permutation(self.presentation.word(text), self.generators)

    def is_regular(self) -> bool:
        return self.is_transitive() and self.order() == self.degree


def cyclic(n: int) -> RegularGroup:
    return RegularGroup([Permutation([(i + 1) % n for i in range(n)])], name=f"Z{n}")


class DihedralGroup(RegularGroup):
    """``D_m = <a, b | a^m = b^2 = 1, a^b = a^-1>`` acting regularly on ``2m`` points.

    Point ``i + m*j`` is the element ``a^i b^j``.
    """

    def __init__(self, m: int):
        self.m = m
        super().__init__([self.element(1, 0), self.element(0, 1)], name=f"D{m}")

    def element(self, i: int, j: int) -> Permutation:
        """Right multiplication by ``a^i b^j``."""
        m = self.m
        images = []
        for l in range(2):
            for k in range(m):
                # a^k b^l a^i b^j = a^(k + (-1)^l i) b^(l + j)
                images.append((k + (i if l == 0 else -i)) % m + m * ((l + j) % 2))
        return Permutation._wrap(np.array(images, dtype=_INDEX))


def dihedral(m: int) -> DihedralGroup:
    if m < 3:
        raise ValueError("dihedral groups need m >= 3")
    return DihedralGroup(m)


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return PermGroup.trivial(1)
    gens = [Permutation([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(Permutation(list(range(1, n)) + [0]))
    return PermGroup(gens, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup.trivial(max(n, 1))
    # 3-cycles (0 1 i) generate A_n
    gens = []
    for i in range(2, n):
        img = list(range(n))
        img[0], img[1], img[i] = 1, i, 0
        gens.append(Permutation(img))
    return PermGroup(gens, name=f"A{n}")


def _mobius(gf, a, b, c, d) -> Permutation:
    """x -> (a x + b) / (c x + d) on the projective line; infinity is point q."""
    q = gf.q
    add, mul, inv = gf.add, gf.mul, gf.inv
    images = []
    for x in range(q + 1):
        if x == q:
            num, den = a, c
        else:
            num, den = add[mul[a, x], b], add[mul[c, x], d]
        images.append(q if den == 0 else int(mul[num, inv[den]]))
    return Permutation(images)


def projective_linear(q: int, kind: str = "psl") -> PermGroup:
    """PSL(2,q) or PGL(2,q) acting on the q+1 points of the projective line."""
    if kind not in ("psl", "pgl"):
        raise ValueError("kind must be 'psl' or 'pgl'")
    gf = field(q)
    lam = gf.primitive
    one, zero = 1, 0
    minus_one = int(gf.neg[1])
    gens = [_mobius(gf, one, e, zero, one) for e in gf.basis()]
    if q > 3:
        gens.append(_mobius(gf, int(gf.mul[lam, lam]), zero, zero, one))
    gens.append(_mobius(gf, zero, minus_one, one, zero))
    if kind == "pgl":
        gens.append(_mobius(gf, lam, zero, zero, one))
    return PermGroup(gens, name=f"{kind.upper()}(2,{q})")


def projective_linear_order(q: int, kind: str = "psl") -> int:
    n = q * (q - 1) * (q + 1)
    return n // gcd(2, q - 1) if kind == "psl" else n


def _normalize(gf, v):
    for x in v:
        if x:
            s = gf.inv[x]
            return tuple(int(gf.mul[s, y]) for y in v)
    raise ValueError("zero vector")


def _projective_points(gf, dim):
    pts = []
    for v in product(range(gf.q), repeat=dim):
        if any(v) and _normalize(gf, v) == v:
            pts.append(v)
    return pts


def _matvec(gf, m, v):
    out = []
    for row in m:
        s = 0
        for a, x in zip(row, v):
            s = gf.add[s, gf.mul[a, x]]
        out.append(int(s))
    return tuple(out)


def _inverse_transpose_3(gf, m):
    # adjugate transpose / det; for unimodular m the cofactor matrix suffices
    def det2(a, b, c, d):
        return gf.add[gf.mul[a, d], gf.neg[gf.mul[b, c]]]
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = det2(m[rows[0]][cols[0]], m[rows[0]][cols[1]],
                         m[rows[1]][cols[0]], m[rows[1]][cols[1]])
            cof[i][j] = int(minor if (i + j) % 2 == 0 else gf.neg[minor])
    return cof


def psl34_with_duality(include_duality: bool = True) -> PermGroup:
    """PSL(3,4) on the 21 points and 21 lines of PG(2,4), extended by a duality.

    Objects ``0..20`` are points ``<x>``, objects ``21..41`` the lines
    ``{y : u.y = 0}`` with normal vectors in the same order.  Matrices act as
    ``x -> Mx`` on points and ``u -> M^-T u`` on lines; the duality swaps
    point ``i`` with line ``21 + i`` and conjugates ``M`` to ``M^-T``.
    """
    gf = field(4)
    pts = _projective_points(gf, 3)
    index = {v: i for i, v in enumerate(pts)}
    n = len(pts)
    gens = []
    for i, j in product(range(3), repeat=2):
        if i == j:
            continue
        for t in (1, 2):
            m = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
            m[i][j] = t
            mt = _inverse_transpose_3(gf, m)
            images = [index[_normalize(gf, _matvec(gf, m, v))] for v in pts]
            images += [n + index[_normalize(gf, _matvec(gf, mt, v))] for v in pts]
            gens.append(Permutation(images))
    if include_duality:
        gens.append(Permutation([n + i for i in range(n)] + list(range(n))))
    return PermGroup(gens, name="PSL(3,4).2" if include_duality else "PSL(3,4)")


def frobenius_f20() -> PermGroup:
    """AGL(1,5) = F20 on 5 points."""
    return PermGroup([Permutation([(x + 1) % 5 for x in range(5)]),
                      Permutation([(2 * x) % 5 for x in range(5)])], name="F20")


def affine_group_24(kind: str) -> PermGroup:
    """Affine groups of the plane GF(4)^2 on 16 points.

    ``kind`` is one of ``ASL``, ``AGL``, ``ASigmaL``, ``AGammaL``.
    """
    gf = field(4)
    vecs = list(product(range(4), repeat=2))
    index = {v: i for i, v in enumerate(vecs)}

    def affine(m, t=(0, 0), frob=False):
        images = []
        for v in vecs:
            if frob:
                v = tuple(gf.frobenius(x) for x in v)
            w = _matvec(gf, m, v)
            images.append(index[tuple(int(gf.add[a, b]) for a, b in zip(w, t))])
        return Permutation(images)

    w = gf.primitive
    ident = [[1, 0], [0, 1]]
    gens = [affine(ident, (1, 0)), affine(ident, (w, 0)),
            affine([[1, 1], [0, 1]]), affine([[1, 0], [1, 1]]),
            affine([[w, 0], [0, int(gf.inv[w])]])]
    if kind in ("AGL", "AGammaL"):
        gens.append(affine([[w, 0], [0, 1]]))
    if kind in ("ASigmaL", "AGammaL"):
        gens.append(affine(ident, frob=True))
    if kind not in ("ASL", "AGL", "ASigmaL", "AGammaL"):
        raise ValueError(f"unknown affine kind {kind!r}")
    return PermGroup(gens, name=f"{kind}(2,4)")


def presented_group(p: Presentation | str, bound: int | None = None) -> RegularGroup:
    """The regular permutation representation of a finitely presented group."""
    if isinstance(p, str):
        p = Presentation.parse(p)
    kwargs = {} if bound is None else {"bound": bound}
    table = coset_enumeration(p, (), raise_on_bound=True, **kwargs)
    return RegularGroup(table.permutations(), presentation=p)


def normalizer(g: PermGroup, h: PermGroup, bound: int = DEFAULT_ENUM_BOUND) -> PermGroup:
    """``N_g(h)`` by enumerating ``g``."""
    elems = g.element_array(bound)
    hkeys = {row.tobytes() for row in h.element_array(bound)}
    ok = np.ones(len(elems), dtype=bool)
    rows = np.arange(len(elems))[:, None]
    for x in h.generators:
        conj = np.empty_like(elems)
        conj[rows, elems] = elems[:, x.array]
        ok &= np.array([r.tobytes() in hkeys for r in conj])
    members = [Permutation._wrap(r) for r in elems[ok]]
    return _generate_from(members, g.degree)


def _generate_from(members: list[Permutation], degree: int) -> PermGroup:
    target = len(members)
    gens: list[Permutation] = []
    h = PermGroup.trivial(degree)
    for e in members:
        if not h.contains(e):
            gens.append(e)
            h = PermGroup(gens)
            if h.order() == target:
                break
    return h


def _random_of_order(g: PermGroup, k: int, rng, attempts: int) -> Permutation | None:
    for _ in range(attempts):
        x = g.random_element(rng)
        m = x.order()
        if m % k == 0:
            return x.power(m // k)
    return None


def find_subgroup(g: PermGroup, target, seed: int = DEFAULT_SEED, attempts: int = 20000,
                  bound: int = DEFAULT_ENUM_BOUND) -> PermGroup:
    """Find a subgroup of a given isomorphism type.

    ``target`` is ``"A5"``, ``"D<k>"`` (dihedral of order ``2k``) or
    ``("sylow-normalizer", p)`` / ``"sylow-normalizer:p"``.  Results are
    re-verified against their defining relations before being returned.
    """
    rng = np.random.default_rng(seed)
    if isinstance(target, str) and target.startswith("sylow-normalizer"):
        target = ("sylow-normalizer", int(target.split(":")[1]))
    if isinstance(target, tuple):
        return _sylow_normalizer(g, target[1], rng, attempts, bound)
    if target == "A5":
        return _find_a5(g, rng, attempts, bound)
    if isinstance(target, str) and target[0] == "D" and target[1:].isdigit():
        return _find_dihedral(g, int(target[1:]), rng, attempts, bound)
    raise ValueError(f"unsupported subgroup target {target!r}")


def _find_a5(g, rng, attempts, bound):
    if g.order() % 60:
        raise SearchExhaustedError("group order is not divisible by 60", 0)
    for tried in range(1, attempts + 1):
        x = _random_of_order(g, 2, rng, 50)
        y = _random_of_order(g, 3, rng, 50)
        if x is None or y is None:
            continue
        if (x * y).order() == 5:
            h = PermGroup([x, y], name="A5")
            if h.order() == 60:
                return h
    raise SearchExhaustedError("no A5 found within the search budget", attempts)


def _find_dihedral(g, k, rng, attempts, bound):
    if g.order() % (2 * k):
        raise SearchExhaustedError(f"group order is not divisible by {2 * k}", 0)
    for tried in range(1, attempts + 1):
        r = _random_of_order(g, k, rng, 50)
        s = _random_of_order(g, 2, rng, 50)
        if r is None or s is None:
            continue
        if r.conjugate(s) == r.inverse():
            h = PermGroup([r, s], name=f"D{k}")
            if h.order() == 2 * k:
                return h
    raise SearchExhaustedError(f"no D{k} found within the search budget", attempts)


def _sylow_normalizer(g, p, rng, attempts, bound):
    order = g.order()
    p_part = 1
    while order % (p_part * p) == 0:
        p_part *= p
    if p_part == 1:
        raise SearchExhaustedError(f"{p} does not divide the group order", 0)
    x = _random_of_order(g, p, rng, attempts)
    if x is None:
        raise SearchExhaustedError(f"no element of order {p} found", attempts)
    sylow = PermGroup([x])
    while sylow.order() < p_part:
        # a Sylow subgroup properly normalizes a smaller p-subgroup, so some
        # p-part of an element of N(P) lies outside P
        grow = None
        for e in normalizer(g, sylow, bound).elements(bound):
            m = e.order()
            while m % p == 0:
                m //= p
            cand = e.power(m)
            if not sylow.contains(cand):
                grow = cand
                break
        if grow is None:
            raise SearchExhaustedError("could not extend the p-subgroup", attempts)
        sylow = PermGroup(sylow.generators + [grow])
    result = normalizer(g, sylow, bound)
    result.name = f"N(Sylow{p})"
    result.sylow = sylow
    return result


def involution_class_reps(h: PermGroup, bound: int = DEFAULT_ENUM_BOUND) -> list[Permutation]:
    """One involution from each ``h``-conjugacy class of involutions."""
    elems = h.element_array(bound)
    invols = [Permutation._wrap(r) for r in elems[element_orders(elems) == 2]]
    reps: list[Permutation] = []
    covered: set = set()
    for t in invols:
        if t in covered:
            continue
        reps.append(t)
        orbit = {t}
        frontier = [t]
        while frontier:
            nxt = []
            for y in frontier:
                for s in h.generators:
                    z = y.conjugate(s)
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        covered |= orbit
    return reps


def find_double_coset_element(g: PermGroup, h: PermGroup, order: int = 2, ratio: int = 5,
                              generate: bool = True, candidates: Sequence[Permutation] | None = None,
                              seed: int = DEFAULT_SEED, attempts: int = 20000,
                              bound: int = DEFAULT_ENUM_BOUND,
                              accept: Callable[[Permutation], bool] | None = None) -> Permutation:
    """An element ``d`` of ``g`` of the given order with ``|HdH|/|H| = ratio``.

    With ``generate`` set, ``<H, d>`` must be all of ``g``.  Candidates are
    taken from ``candidates`` when given; otherwise from the centralizers of
    the involutions of ``H`` (an involution ``d`` normalizes ``H cap H^d``,
    which in practice forces it to centralize some involution there), then
    from random elements.
    """
    for x in h.generators:
        if not g.contains(x):
            raise NotAMemberError("h is not a subgroup of g")
    g_order = g.order()
    if h.order() == g_order:
        raise SearchExhaustedError("h is the whole group; no element lies outside it", 0)
    space = CosetSpace(g, h, bound=bound, check=False)
    tried = 0

    def ok(d: Permutation) -> bool:
        if d.order() != order or h.contains(d):
            return False
        if space.double_coset_ratio(d, cap=ratio) != ratio:
            return False
        if generate and PermGroup(h.generators + [d]).order() != g_order:
            return False
        return accept is None or accept(d)

    def pool():
        if candidates is not None:
            yield from candidates
            return
        for t in involution_class_reps(h, bound):
            cent = centralizer_of_element(g, t, bound=bound)
            elems = cent.element_array(bound)
            for i in np.flatnonzero(element_orders(elems) == order):
                yield Permutation._wrap(elems[i])
        rng = np.random.default_rng(seed)
        for _ in range(attempts):
            d = _random_of_order(g, order, rng, 50)
            if d is not None:
                yield d

    seen: set = set()
    for d in pool():
        if d in seen:
            continue
        seen.add(d)
        tried += 1
        if ok(d):
            return d
    raise SearchExhaustedError(f"no double-coset witness among {tried} candidates", tried)


__all__ = [
    "DEFAULT_SEED", "RegularGroup", "DihedralGroup", "cyclic", "dihedral", "symmetric",
    "alternating", "projective_linear", "projective_linear_order", "psl34_with_duality",
    "frobenius_f20", "affine_group_24", "presented_group", "normalizer", "find_subgroup",
    "find_double_coset_element", "involution_class_reps", "direct_product", "prime_power",
]
