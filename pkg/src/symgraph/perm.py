"""Permutations and permutation groups.

Composition convention, used everywhere in the package: ``compose(p, q)``
(also written ``p * q``) applies ``p`` first and then ``q``, so the image of
``i`` is ``q[p[i]]``.  Groups act on the right: ``i^(pq) = (i^p)^q``.

Group orders, membership and stabilizers come from a base and strong
generating set built by the Schreier-Sims algorithm.  Element-level
enumeration (conjugacy classes, centralizers, element searches) is
vectorized with numpy and guarded by explicit size bounds.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import (
    BoundExceededError,
    DegreeMismatchError,
    NotAMemberError,
)

DEFAULT_ENUM_BOUND = 10**6
DEFAULT_MINIMAL_NORMAL_BOUND = 10**7
RANDOM_SIFT_DEGREE = 1000

_INDEX = np.int32


class Permutation:
    """A bijection of ``{0, ..., degree-1}`` stored as an image table."""

    __slots__ = ("_a", "_hash")

    def __init__(self, images: Iterable[int]):
        a = np.array(list(images) if not isinstance(images, np.ndarray) else images,
                     dtype=_INDEX)
        if a.ndim != 1:
            raise ValueError("images must be one-dimensional")
        n = a.shape[0]
        if n and (a.min() < 0 or a.max() >= n or np.bincount(a, minlength=n).max() != 1):
            raise ValueError("images do not form a bijection")
        a.setflags(write=False)
        self._a = a
        self._hash = None

    @classmethod
    def _wrap(cls, a: np.ndarray) -> Permutation:
        # trusted constructor: caller guarantees a bijection
        p = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=_INDEX)
        a.setflags(write=False)
        p._a = a
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._wrap(np.arange(degree, dtype=_INDEX))

    @classmethod
    def from_cycles(cls, text: str, degree: int | None = None) -> Permutation:
        """Parse cycle notation such as ``"(0 1 2)(3 4)"``.

        Points may be separated by spaces or commas.  ``"()"`` is the identity.
        The degree defaults to one more than the largest point mentioned.
        """
        cycles = []
        stripped = text.strip()
        pos = 0
        for m in re.finditer(r"\(([^()]*)\)", stripped):
            if stripped[pos:m.start()].strip():
                raise ValueError(f"could not parse permutation {text!r}")
            pos = m.end()
            body = m.group(1).strip()
            if body:
                cycles.append([int(t) for t in re.split(r"[\s,]+", body)])
        if stripped[pos:].strip():
            raise ValueError(f"could not parse permutation {text!r}")
        largest = max((max(c) for c in cycles), default=-1)
        if degree is None:
            degree = largest + 1
        elif largest >= degree:
            raise ValueError(f"point {largest} out of range for degree {degree}")
        images = list(range(degree))
        seen = set()
        for c in cycles:
            if len(set(c)) != len(c) or seen & set(c):
                raise ValueError(f"cycles in {text!r} are not disjoint")
            seen.update(c)
            for i, x in enumerate(c):
                images[x] = c[(i + 1) % len(c)]
        return cls(images)

    @classmethod
    def from_json(cls, data: dict | str) -> Permutation:
        if isinstance(data, str):
            data = json.loads(data)
        images = data["images"]
        if len(images) != data["degree"]:
            raise ValueError("degree does not match the length of images")
        return cls(images)

    def to_json(self) -> dict:
        return {"degree": self.degree, "images": self._a.tolist()}

    @property
    def degree(self) -> int:
        return int(self._a.shape[0])

    @property
    def array(self) -> np.ndarray:
        """Read-only numpy view of the image table."""
        return self._a

    @property
    def images(self) -> tuple:
        return tuple(self._a.tolist())

    def __call__(self, point: int) -> int:
        return int(self._a[point])

    def __len__(self) -> int:
        return self.degree

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, k: int) -> Permutation:
        return self.power(k)

    def __invert__(self) -> Permutation:
        return self.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._a.tobytes())
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"

    def inverse(self) -> Permutation:
        return Permutation._wrap(_inv(self._a))

    def power(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse().power(-k)
        result = np.arange(self.degree, dtype=_INDEX)
        base = self._a
        while k:
            if k & 1:
                result = base[result]
            base = base[base]
            k >>= 1
        return Permutation._wrap(result)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._a, np.arange(self.degree)))

    def cycles(self) -> list[list[int]]:
        """Non-trivial cycles, each starting at its smallest point."""
        a = self._a
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for i in range(self.degree):
            if seen[i] or a[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = int(a[i])
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = int(a[j])
            out.append(cyc)
        return out

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def order(self) -> int:
        n = 1
        for c in self.cycles():
            n = n * len(c) // gcd(n, len(c))
        return n

    def fixed_points(self) -> list[int]:
        return np.flatnonzero(self._a == np.arange(self.degree)).tolist()

    def conjugate(self, by: Permutation) -> Permutation:
        """``by^-1 * self * by``, i.e. ``self`` relabelled by ``by``."""
        b = by._a
        out = np.empty_like(self._a)
        out[b] = b[self._a]
        return Permutation._wrap(out)


def _inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(a.shape[0], dtype=a.dtype)
    return out


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p`` first, then ``q``."""
    if p.degree != q.degree:
        raise DegreeMismatchError(f"cannot compose degree {p.degree} with degree {q.degree}")
    return Permutation._wrap(q._a[p._a])


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def commutator(x: Permutation, y: Permutation) -> Permutation:
    """``x^-1 y^-1 x y``."""
    return x.inverse() * y.inverse() * x * y


@dataclass(frozen=True)
class FactoredOrder:
    value: int
    factors: tuple = field(default=())

    @classmethod
    def of(cls, n: int) -> FactoredOrder:
        if n < 1:
            raise ValueError("orders are positive")
        factors = []
        m, p = n, 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                factors.append((p, e))
            p += 1 if p == 2 else 2
        if m > 1:
            factors.append((m, 1))
        return cls(n, tuple(factors))

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, FactoredOrder):
            return self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        if self.value == 1:
            return "1"
        return "·".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


class _Level:
    """One level of a stabilizer chain: a base point and its transversal."""

    __slots__ = ("point", "orbit", "index", "reps")

    def __init__(self, point: int):
        self.point = point
        self.orbit: list[int] = []
        self.index: dict[int, int] = {}
        self.reps: list[np.ndarray] = []

    def extend(self, gens: list[np.ndarray], degree: int):
        """Grow the orbit under ``gens``, keeping existing transversal elements."""
        if not self.orbit:
            self.orbit.append(self.point)
            self.index[self.point] = 0
            self.reps.append(np.arange(degree, dtype=_INDEX))
        queue = list(range(len(self.orbit)))
        head = 0
        while head < len(queue):
            i = queue[head]
            head += 1
            pt = self.orbit[i]
            u = self.reps[i]
            for s in gens:
                img = int(s[pt])
                if img not in self.index:
                    self.index[img] = len(self.orbit)
                    self.orbit.append(img)
                    self.reps.append(s[u])
                    queue.append(len(self.orbit) - 1)

    def rep(self, pt: int) -> np.ndarray:
        return self.reps[self.index[pt]]


class BSGS:
    """Base and strong generating set.

    ``levels[i].reps`` holds, for each point ``g`` of the basic orbit, an
    element of the ``i``-th stabilizer mapping the base point to ``g``.
    Every group element factors uniquely as ``u_k * ... * u_1`` with ``u_i``
    taken from level ``i`` (deepest applied first).
    """

    def __init__(self, degree: int, base: list[int], strong: list[np.ndarray]):
        self.degree = degree
        self.base = list(base)
        self.strong = list(strong)
        self.levels: list[_Level] = []

    @property
    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.orbit)
        return n

    def level_gens(self, i: int) -> list[np.ndarray]:
        fixed = self.base[:i]
        return [s for s in self.strong if all(s[b] == b for b in fixed)]

    def strip(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        """Sift ``g`` from level ``start``; return residue and the level it stopped at."""
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            img = int(g[lv.point])
            k = lv.index.get(img)
            if k is None:
                return g, i
            g = _inv(lv.reps[k])[g]
        return g, len(self.levels)

    def contains(self, g: np.ndarray) -> bool:
        residue, _ = self.strip(g)
        return bool(np.array_equal(residue, np.arange(self.degree)))

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        g = np.arange(self.degree, dtype=_INDEX)
        for lv in reversed(self.levels):
            u = lv.reps[int(rng.integers(len(lv.reps)))]
            g = u[g]
        return g

    def element_array(self, bound: int) -> np.ndarray:
        """All group elements as rows of an ``(order, degree)`` array."""
        if self.order > bound:
            raise BoundExceededError(f"group order {self.order} exceeds enumeration bound {bound}")
        elems = np.arange(self.degree, dtype=_INDEX)[None, :]
        for lv in reversed(self.levels):
            reps = np.stack(lv.reps)
            elems = reps[:, elems].reshape(-1, self.degree)
        return elems


def _schreier_sims(degree: int, gens: list[np.ndarray], base: Sequence[int] = (),
                   rng: np.random.Generator | None = None) -> BSGS:
    ident = np.arange(degree, dtype=_INDEX)
    gens = [g for g in gens if not np.array_equal(g, ident)]
    base = list(dict.fromkeys(base))
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(int(np.flatnonzero(g != ident)[0]))
    bsgs = BSGS(degree, base, gens)

    def rebuild(i):
        while len(bsgs.levels) <= i:
            bsgs.levels.append(_Level(bsgs.base[len(bsgs.levels)]))
        bsgs.levels[i].extend(bsgs.level_gens(i), degree)

    for i in range(len(base)):
        rebuild(i)

    def add_residue(residue, j, i_from):
        if j == len(bsgs.base):
            bsgs.base.append(int(np.flatnonzero(residue != ident)[0]))
        bsgs.strong.append(residue)
        for lv in range(i_from, j + 1):
            rebuild(lv)

    if rng is not None and degree > RANDOM_SIFT_DEGREE and gens:
        # randomized pre-pass: cheap sifting of random products seeds the chain
        # so the exact pass below seldom needs to restart
        pool = [g.copy() for g in gens] * 2
        misses = 0
        while misses < 20:
            a, b = rng.choice(len(pool), size=2, replace=False)
            pool[a] = pool[b][pool[a]]
            residue, j = bsgs.strip(pool[a])
            if j < len(bsgs.levels) or not np.array_equal(residue, ident):
                add_residue(residue, j, 0)
                misses = 0
            else:
                misses += 1

    done: list[set] = [set() for _ in bsgs.base]
    i = len(bsgs.base) - 1
    while i >= 0:
        while len(done) < len(bsgs.base):
            done.append(set())
        lv = bsgs.levels[i]
        s_i = bsgs.level_gens(i)
        restarted = False
        for k in range(len(lv.orbit)):
            pt = lv.orbit[k]
            u = lv.reps[k]
            for s in s_i:
                key = (pt, s.tobytes())
                if key in done[i]:
                    continue
                us = s[u]
                v = lv.rep(int(s[pt]))
                if np.array_equal(us, v):
                    done[i].add(key)
                    continue
                h = _inv(v)[us]
                residue, j = bsgs.strip(h, i + 1)
                if j < len(bsgs.levels) or not np.array_equal(residue, ident):
                    add_residue(residue, j, i + 1)
                    i = j
                    restarted = True
                    break
                done[i].add(key)
            if restarted:
                break
        if not restarted:
            i -= 1
    return bsgs


class PermGroup:
    """A permutation group given by generators, with a lazily built BSGS.

    The BSGS is built at most once per instance under a lock, so concurrent
    readers see either no chain or a complete one.
    """

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None,
                 name: str | None = None):
        generators = list(generators)
        if not generators:
            raise ValueError("a group needs at least one generator (use the identity)")
        if degree is None:
            degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise DegreeMismatchError("all generators must share one degree")
        self.degree = degree
        self.generators = generators
        self.name = name
        self._bsgs: BSGS | None = None
        self._lock = threading.Lock()
        self._base_hint: tuple = ()

    @classmethod
    def trivial(cls, degree: int) -> PermGroup:
        return cls([Permutation.identity(degree)])

    def to_json(self) -> dict:
        out = {"degree": self.degree, "generators": [g.array.tolist() for g in self.generators]}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> PermGroup:
        """Read ``{"degree": d, "generators": [[images], ...]}``."""
        if isinstance(data, str):
            data = json.loads(data)
        degree = int(data["degree"])
        gens = [Permutation.from_json({"degree": degree, "images": g}) for g in data["generators"]]
        return cls(gens or [Permutation.identity(degree)], degree, data.get("name"))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<PermGroup{label} degree={self.degree} gens={len(self.generators)}>"

    @property
    def bsgs(self) -> BSGS:
        if self._bsgs is None:
            with self._lock:
                if self._bsgs is None:
                    rng = np.random.default_rng(0)
                    self._bsgs = _schreier_sims(self.degree, [g.array for g in self.generators],
                                                self._base_hint, rng)
        return self._bsgs

    def with_base(self, base: Sequence[int]) -> PermGroup:
        """Same group, with a BSGS whose base starts with ``base``."""
        h = PermGroup(self.generators, self.degree, self.name)
        if self._bsgs is not None:
            strong = self._bsgs.strong
        else:
            strong = [g.array for g in self.generators]
        h._bsgs = _schreier_sims(self.degree, strong, base)
        return h

    def order(self) -> int:
        return self.bsgs.order

    def factored_order(self) -> FactoredOrder:
        return FactoredOrder.of(self.order())

    def __len__(self) -> int:
        return self.order()

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError("degree mismatch in membership test")
        return self.bsgs.contains(p.array)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: PermGroup) -> bool:
        """Equal as sets: same order and mutual generator membership."""
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other))

    def strong_generators(self) -> list[Permutation]:
        return [Permutation._wrap(s) for s in self.bsgs.strong]

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        out = [point]
        for x in out:
            for g in self.generators:
                y = int(g.array[x])
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out

    def orbits(self) -> list[list[int]]:
        """Orbits as sorted cells, ordered by their smallest point."""
        return _orbits([g.array for g in self.generators], self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    def random_element(self, rng: np.random.Generator) -> Permutation:
        return Permutation._wrap(self.bsgs.random_element(rng))

    def element_array(self, bound: int = DEFAULT_ENUM_BOUND) -> np.ndarray:
        return self.bsgs.element_array(bound)

    def elements(self, bound: int = DEFAULT_ENUM_BOUND) -> Iterator[Permutation]:
        for row in self.element_array(bound):
            yield Permutation._wrap(row)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all((a * b) == (b * a) for i, a in enumerate(gens) for b in gens[i + 1:])


def _orbits(gens: list[np.ndarray], degree: int) -> list[list[int]]:
    if degree == 0:
        return []
    rows = np.concatenate([np.arange(degree)] * len(gens)) if gens else np.arange(degree)
    cols = np.concatenate(gens) if gens else np.arange(degree)
    adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(degree, degree))
    _, labels = connected_components(adj, directed=True, connection="weak")
    cells: dict[int, list[int]] = {}
    for pt, lab in enumerate(labels.tolist()):
        cells.setdefault(lab, []).append(pt)
    return sorted(cells.values(), key=lambda c: c[0])


def group_order(g: PermGroup) -> FactoredOrder:
    return g.factored_order()


def orbits(g: PermGroup) -> list[list[int]]:
    return g.orbits()


def stabilizer(g: PermGroup, point: int) -> PermGroup:
    """Point stabilizer, with its BSGS inherited from a chain based at ``point``."""
    if not 0 <= point < g.degree:
        raise ValueError(f"point {point} out of range")
    bsgs = g.bsgs
    if not bsgs.base or bsgs.base[0] != point:
        bsgs = g.with_base([point]).bsgs
    gens = [Permutation._wrap(s) for s in bsgs.level_gens(1)] or [Permutation.identity(g.degree)]
    h = PermGroup(gens, g.degree)
    sub = BSGS(g.degree, bsgs.base[1:], bsgs.level_gens(1))
    sub.levels = bsgs.levels[1:]
    h._bsgs = sub
    return h


def pointwise_stabilizer(g: PermGroup, points: Sequence[int]) -> PermGroup:
    h = g
    for p in points:
        h = stabilizer(h, p)
    return h


def is_semiregular(g: PermGroup) -> bool:
    """True iff every point stabilizer is trivial."""
    n = g.order()
    return all(n == len(cell) for cell in g.orbits())


def is_semiregular_by_elements(g: PermGroup, bound: int = DEFAULT_ENUM_BOUND) -> bool:
    """Independent formulation: no non-identity element fixes a point."""
    elems = g.element_array(bound)
    fixes = (elems == np.arange(g.degree)[None, :])
    nonid = ~fixes.all(axis=1)
    return not bool(fixes[nonid].any())


def _check_members(g: PermGroup, perms: Iterable[Permutation], what: str):
    for p in perms:
        if p.degree != g.degree:
            raise DegreeMismatchError(f"{what} has degree {p.degree}, group degree {g.degree}")
        if not g.contains(p):
            raise NotAMemberError(f"{what} {p.cycle_string()} is not in the group")


def is_normal(g: PermGroup, n: PermGroup) -> bool:
    """True iff ``n`` is normalized by ``g``; ``n`` must be a subgroup of ``g``."""
    _check_members(g, n.generators, "subgroup generator")
    return all(n.contains(x.conjugate(y)) for x in n.generators for y in g.generators)


def subgroup_closure(g: PermGroup, seeds: Sequence[Permutation]) -> PermGroup:
    """Smallest subgroup normalized by ``g`` containing ``seeds`` (membership not checked)."""
    gens = [s for s in seeds if not s.is_identity()]
    if not gens:
        return PermGroup.trivial(g.degree)
    n = PermGroup(gens)
    changed = True
    while changed:
        changed = False
        for x in list(n.generators):
            for y in g.generators:
                c = x.conjugate(y)
                if not n.contains(c):
                    n = PermGroup(n.generators + [c])
                    changed = True
    return n


def normal_closure(g: PermGroup, seed: Permutation | Sequence[Permutation]) -> PermGroup:
    seeds = [seed] if isinstance(seed, Permutation) else list(seed)
    _check_members(g, seeds, "seed")
    return subgroup_closure(g, seeds)


def derived_subgroup(g: PermGroup) -> PermGroup:
    gens = g.generators
    comms = [commutator(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    return subgroup_closure(g, comms)


def _element_keys(elems: np.ndarray, base: list[int], degree: int) -> np.ndarray:
    cols = elems[:, base].astype(np.int64)
    if degree ** len(base) < 2**62:
        weights = degree ** np.arange(len(base), dtype=np.int64)
        return cols @ weights
    _, inv = np.unique(cols, axis=0, return_inverse=True)
    return inv.ravel().astype(np.int64)


def conjugacy_classes(g: PermGroup, bound: int = DEFAULT_ENUM_BOUND) -> list[np.ndarray]:
    """Conjugacy classes as arrays of element rows, by orbits of the conjugation action."""
    bsgs = g.bsgs
    elems = bsgs.element_array(bound)
    base = bsgs.base or [0]
    keys = _element_keys(elems, base, g.degree)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    n = len(elems)
    rows, cols = [], []
    for y in g.generators:
        ya = y.array
        yinv = _inv(ya)
        conj_base = ya[elems[:, yinv[base]]]
        ck = _element_keys(conj_base, list(range(len(base))), g.degree)
        idx = order[np.searchsorted(sorted_keys, ck)]
        rows.append(np.arange(n))
        cols.append(idx)
    adj = coo_matrix((np.ones(n * len(rows), dtype=np.int8),
                      (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    _, labels = connected_components(adj, directed=True, connection="weak")
    classes: dict[int, list[int]] = {}
    for i, lab in enumerate(labels.tolist()):
        classes.setdefault(lab, []).append(i)
    out = [elems[idx] for idx in classes.values()]
    out.sort(key=lambda c: (len(c), c[0].tolist()))
    return out


def element_orders(elems: np.ndarray) -> np.ndarray:
    """Orders of each row of an element array."""
    n, d = elems.shape
    ident = np.arange(d)
    orders = np.zeros(n, dtype=np.int64)
    power = np.broadcast_to(ident, (n, d)).copy()
    k = 0
    remaining = np.arange(n)
    while len(remaining):
        k += 1
        power = np.take_along_axis(elems[remaining], power, axis=1) if k > 1 else elems[remaining].copy()
        done = (power == ident).all(axis=1)
        orders[remaining[done]] = k
        remaining = remaining[~done]
        power = power[~done]
    return orders


class SubgroupList(list):
    """A list of subgroups carrying a ``sampled`` completeness flag."""

    sampled = False


def minimal_normal_subgroups(g: PermGroup, bound: int = DEFAULT_MINIMAL_NORMAL_BOUND,
                             class_bound: int = DEFAULT_ENUM_BOUND, samples: int = 200,
                             seed: int = 0) -> SubgroupList:
    """All minimal normal subgroups of ``g``.

    Each is the normal closure of one of its elements of prime order, so it is
    enough to close one representative of each prime-order conjugacy class and
    keep the minimal results.  Above ``class_bound`` the representatives are
    random elements and the result is flagged ``sampled``.
    """
    order = g.order()
    if order > bound:
        raise BoundExceededError(f"group order {order} exceeds bound {bound}")
    result = SubgroupList()
    if order == 1:
        return result
    primes = set(FactoredOrder.of(order).primes)
    reps: list[Permutation] = []
    if order <= class_bound:
        for cls in conjugacy_classes(g, class_bound):
            p = Permutation._wrap(cls[0])
            if p.order() in primes:
                reps.append(p)
    else:
        result.sampled = True
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            x = g.random_element(rng)
            k = x.order()
            for p in primes:
                if k % p == 0:
                    reps.append(x.power(k // p))
    closures: list[PermGroup] = []
    for x in reps:
        n = subgroup_closure(g, [x])
        if not any(c.equals(n) for c in closures):
            closures.append(n)
    closures.sort(key=PermGroup.order)
    for n in closures:
        if not any(m.order() < n.order() and m.is_subgroup_of(n) for m in closures):
            result.append(n)
    return result


def core(g: PermGroup, h: PermGroup, bound: int = DEFAULT_ENUM_BOUND) -> PermGroup:
    """Largest normal subgroup of ``g`` inside ``h``: the kernel of the action on cosets of ``h``."""
    _check_members(g, h.generators, "subgroup generator")
    from .cosets import CosetSpace

    space = CosetSpace(g, h, bound=bound)
    action = space.action_group()
    # the diagonal group acting on points and cosets together; its pointwise
    # stabilizer of the coset points is the kernel, read off on the first factor
    diag = PermGroup([_pair(a, b) for a, b in zip(g.generators, action.generators)])
    coset_pts = list(range(g.degree, g.degree + space.size))
    bsgs = diag.with_base(coset_pts).bsgs
    kernel = [Permutation._wrap(s[:g.degree]) for s in bsgs.level_gens(len(coset_pts))]
    if not kernel:
        return PermGroup.trivial(g.degree)
    return PermGroup(kernel)


def _pair(a: Permutation, b: Permutation) -> Permutation:
    return Permutation._wrap(np.concatenate([a.array, b.array + a.degree]))


def direct_product(a: PermGroup, b: PermGroup) -> PermGroup:
    """Intransitive direct product on ``deg(a) + deg(b)`` points."""
    ia = Permutation.identity(a.degree)
    ib = Permutation.identity(b.degree)
    gens = [_pair(x, ib) for x in a.generators] + [_pair(ia, y) for y in b.generators]
    return PermGroup(gens)


def elements_of_order(g: PermGroup, k: int, limit: int = 1, bound: int = DEFAULT_ENUM_BOUND,
                      randomized: bool = True, seed: int = 0, attempts: int = 20000
                      ) -> list[Permutation]:
    """Up to ``limit`` distinct elements of exact order ``k``.

    Exhaustive when ``|g| <= bound``; otherwise random elements are powered
    down to order ``k`` when their order is a multiple of ``k``.
    """
    if k == 1:
        return [Permutation.identity(g.degree)]
    order = g.order()
    if order % k:
        return []
    if order <= bound:
        elems = g.element_array(bound)
        orders = element_orders(elems)
        hits = np.flatnonzero(orders == k)[:limit]
        return [Permutation._wrap(elems[i]) for i in hits]
    if not randomized:
        raise BoundExceededError(f"group order {order} exceeds enumeration bound {bound}")
    rng = np.random.default_rng(seed)
    found: dict[Permutation, None] = {}
    for _ in range(attempts):
        x = g.random_element(rng)
        m = x.order()
        if m % k == 0:
            found.setdefault(x.power(m // k))
            if len(found) >= limit:
                break
    return list(found)


def centralizer_of_element(g: PermGroup, x: Permutation, bound: int = DEFAULT_ENUM_BOUND,
                           backtrack: bool = True) -> PermGroup:
    """All elements of ``g`` commuting with ``x``.

    Enumerates ``g`` when it is small; otherwise runs a backtrack search
    over a base adapted to the cycles of ``x``.
    """
    _check_members(g, [x], "element")
    if x.is_identity():
        return g
    if g.order() <= bound:
        elems = g.element_array(bound)
        xa = x.array
        ok = (elems[:, xa] == xa[elems]).all(axis=1)
        gens = [Permutation._wrap(r) for r in elems[ok]]
        return _small_generating_set(gens, g.degree)
    if not backtrack:
        raise BoundExceededError(f"group order {g.order()} exceeds enumeration bound {bound}")
    return _centralizer_backtrack(g, x)


def _small_generating_set(elems: list[Permutation], degree: int) -> PermGroup:
    gens: list[Permutation] = []
    h = None
    target = len(set(elems))
    for e in elems:
        if e.is_identity():
            continue
        if h is None or not h.contains(e):
            gens.append(e)
            h = PermGroup(gens)
            if h.order() == target:
                break
    return h if h is not None else PermGroup.trivial(degree)


def _centralizer_backtrack(g: PermGroup, x: Permutation) -> PermGroup:
    xa = x.array
    base = [p for c in x.cycles() for p in c] + [p for p in range(g.degree) if xa[p] == p]
    adapted = g.with_base(base).bsgs
    base = adapted.base
    pos = {b: i for i, b in enumerate(base)}
    ident = np.arange(g.degree, dtype=_INDEX)
    gens: list[Permutation] = []
    found = PermGroup.trivial(g.degree)

    def consistent(depth, images):
        # commuting with x: img(x(b)) == x(img(b)) whenever both are known
        b = base[depth]
        fwd = pos.get(int(xa[b]))
        if fwd is not None and fwd <= depth and images[fwd] != int(xa[images[depth]]):
            return False
        back = pos.get(int(np.flatnonzero(xa == b)[0]))
        if back is not None and back < depth and images[depth] != int(xa[images[back]]):
            return False
        return True

    def dfs(depth, partial, images):
        nonlocal found
        if depth == len(adapted.levels):
            if np.array_equal(partial[xa], xa[partial]) and not np.array_equal(partial, ident):
                p = Permutation._wrap(partial)
                if not found.contains(p):
                    gens.append(p)
                    found = PermGroup(gens)
            return
        for u in adapted.levels[depth].reps:
            cand = partial[u]
            images.append(int(cand[base[depth]]))
            if consistent(depth, images):
                dfs(depth + 1, cand, images)
            images.pop()

    dfs(0, ident, [])
    return found
