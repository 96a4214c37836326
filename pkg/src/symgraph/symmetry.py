"""Automorphism groups, arc and s-arc transitivity, vertex-stabilizer profiles.

The automorphism search is a plain individualization-refinement scheme:
colour refinement by sorted neighbour colours, branching on the first
smallest non-singleton cell, and pruning of branches already known to lie
in an orbit of the generators found so far.  Only generators are produced,
never a canonical form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .atlas import (
    affine_group_24,
    alternating,
    cyclic,
    dihedral,
    frobenius_f20,
    symmetric,
)
from .exceptions import BoundExceededError, NotAutomorphismError, PreconditionError
from .graphs import Graph
from .perm import (
    FactoredOrder,
    Permutation,
    PermGroup,
    _INDEX,
    derived_subgroup,
    direct_product,
    element_orders,
    pointwise_stabilizer,
    stabilizer,
)

DEFAULT_IR_MAX_VERTICES = 600
S_MAX = 5
ARC_ORBIT_CAP = 2_000_000
HISTOGRAM_BOUND = 10**5
PROP23_BOUND = 23040  # 2^9 * 3^2 * 5


# refinement

def _padded_neighbors(graph: Graph) -> np.ndarray:
    """Neighbor lists padded with the sentinel ``n`` to a rectangle."""
    n = graph.n
    width = max(graph.degrees(), default=0)
    out = np.full((n, max(width, 1)), n, dtype=np.int64)
    for v, row in enumerate(graph.adjacency):
        out[v, :len(row)] = row
    return out


def _refine(colors: np.ndarray, nbrs: np.ndarray) -> tuple[np.ndarray, tuple]:
    """Refine to the coarsest equitable colouring below ``colors``.

    New colours are ranks of ``(colour, sorted neighbour colours)`` so the
    result, and the trace of cell sizes, is isomorphism invariant.
    """
    trace = []
    count = -1
    ext = np.empty(len(colors) + 1, dtype=np.int64)
    while True:
        ext[:-1] = colors
        ext[-1] = -1
        key = np.concatenate([colors[:, None], np.sort(ext[nbrs], axis=1)], axis=1)
        _, colors, sizes = np.unique(key, axis=0, return_inverse=True, return_counts=True)
        colors = colors.ravel().astype(np.int64)
        trace.append(hash(sizes.tobytes()))
        if len(sizes) == count:
            return colors, tuple(trace)
        count = len(sizes)


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    out = colors * 2
    out[v] += 1
    return out


def _target_cell(colors: np.ndarray) -> np.ndarray | None:
    sizes = np.bincount(colors)
    big = np.flatnonzero(sizes > 1)
    if not len(big):
        return None
    c = big[np.argmin(sizes[big])]
    return np.flatnonzero(colors == c)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


@dataclass
class AutomorphismResult:
    group: PermGroup
    base: list
    orbit_lengths: list
    nodes: int

    @property
    def order(self) -> int:
        return int(np.prod(self.orbit_lengths, dtype=object)) if self.orbit_lengths else 1


def automorphism_search(graph: Graph, max_vertices: int = DEFAULT_IR_MAX_VERTICES,
                        colors=None) -> AutomorphismResult:
    """Generators of ``Aut(graph)`` (colour-preserving when ``colors`` is given).

    Along the first path of the search tree the base points ``v_0, v_1, ...``
    are chosen; at each level, deepest first, every vertex of the target
    cell outside the current orbit of ``v_i`` is tried, and the first leaf
    below it that maps the first leaf by an automorphism contributes a
    generator.  The product of the final orbit lengths is the group order.
    """
    n = graph.n
    if n > max_vertices:
        raise BoundExceededError(
            f"{n} vertices exceeds the search bound {max_vertices}; verify a known group instead")
    if n == 0:
        raise PreconditionError("empty graph")
    nbrs = _padded_neighbors(graph)
    init = np.array(graph.degrees() if colors is None else colors, dtype=np.int64)
    if colors is not None:
        init = init * (nbrs.shape[1] + 1) + np.array(graph.degrees())
    root, root_trace = _refine(np.unique(init, return_inverse=True)[1].ravel().astype(np.int64), nbrs)

    path = [(root, root_trace)]
    base: list[int] = []
    cells: list[np.ndarray] = []
    while True:
        colors_i = path[-1][0]
        cell = _target_cell(colors_i)
        if cell is None:
            break
        v = int(cell[0])
        base.append(v)
        cells.append(cell)
        path.append(_refine(_individualize(colors_i, v), nbrs))
    first_leaf = path[-1][0]
    first_inv = np.empty(n, dtype=np.int64)
    first_inv[first_leaf] = np.arange(n)
    gens: list[np.ndarray] = []
    stats = {"nodes": len(path)}

    def leaf_automorphism(leaf: np.ndarray) -> np.ndarray | None:
        # gamma maps the vertex with colour c in the first leaf to the one with colour c here
        inv = np.empty(n, dtype=np.int64)
        inv[leaf] = np.arange(n)
        gamma = inv[first_leaf]
        ext = np.append(gamma, n)
        if not (np.sort(ext[nbrs], axis=1) == nbrs[gamma]).all():
            return None
        if colors is not None and not (init[gamma] == init).all():
            return None
        return gamma

    def explore(colors_d: np.ndarray, depth: int) -> np.ndarray | None:
        stats["nodes"] += 1
        cell = _target_cell(colors_d)
        if cell is None:
            return leaf_automorphism(colors_d)
        if depth >= len(path) - 1 or len(cell) != len(cells[depth]):
            return None
        for w in cell:
            child, trace = _refine(_individualize(colors_d, int(w)), nbrs)
            if trace != path[depth + 1][1]:
                continue
            found = explore(child, depth + 1)
            if found is not None:
                return found
        return None

    orbit_lengths = [0] * len(base)
    for level in range(len(base) - 1, -1, -1):
        uf = _UnionFind(n)
        for g in gens:
            for x in range(n):
                uf.union(x, int(g[x]))
        v = base[level]
        for w in cells[level]:
            w = int(w)
            if uf.find(w) == uf.find(v):
                continue
            child, trace = _refine(_individualize(path[level][0], w), nbrs)
            if trace != path[level + 1][1]:
                continue
            gamma = explore(child, level + 1)
            if gamma is not None:
                gens.append(gamma)
                for x in range(n):
                    uf.union(x, int(gamma[x]))
        root_v = uf.find(v)
        orbit_lengths[level] = sum(1 for x in range(n) if uf.find(x) == root_v)

    perms = [Permutation._wrap(g.astype(_INDEX)) for g in gens] or [Permutation.identity(n)]
    group = PermGroup(perms, n, name="Aut")
    return AutomorphismResult(group, base, orbit_lengths, stats["nodes"])


def automorphism_group(graph: Graph, max_vertices: int = DEFAULT_IR_MAX_VERTICES) -> PermGroup:
    return automorphism_search(graph, max_vertices).group


# containment and transitivity

def verify_automorphisms(graph: Graph, g: PermGroup) -> bool:
    """True iff every generator of ``g`` preserves adjacency."""
    if g.degree != graph.n:
        return False
    return all(graph.is_automorphism(x) for x in g.generators)


def _require_automorphisms(graph: Graph, g: PermGroup):
    if g.degree != graph.n:
        raise NotAutomorphismError(f"group degree {g.degree} differs from vertex count {graph.n}")
    for x in g.generators:
        if not graph.is_automorphism(x):
            raise NotAutomorphismError(f"{x.cycle_string()} is not an automorphism")


def arc_permutations(graph: Graph, g: PermGroup) -> list[np.ndarray]:
    """Action of each generator on the arcs ``(v, nbrs[v][j])`` indexed ``v*k + j``."""
    nbrs = graph.neighbor_array()
    k = nbrs.shape[1]
    out = []
    for x in g.generators:
        a = x.array
        targets = a[nbrs]
        rows = nbrs[a]
        pos = (rows[:, None, :] == targets[:, :, None]).argmax(axis=2)
        out.append((a[:, None] * k + pos).ravel())
    return out


def is_arc_transitive(graph: Graph, g: PermGroup) -> bool:
    """True iff the orbit of one arc under ``g`` contains all ``2|E|`` arcs."""
    _require_automorphisms(graph, g)
    if graph.edge_count == 0:
        return False
    if graph.valency is None:
        return False
    from .perm import _orbits

    return len(_orbits(arc_permutations(graph, g), 2 * graph.edge_count)) == 1


def count_s_arcs(graph: Graph, s: int) -> int:
    """Number of s-arcs by walking them all (an oracle for small graphs)."""
    total = 0
    stack = [(v,) for v in range(graph.n)]
    while stack:
        walk = stack.pop()
        if len(walk) == s + 1:
            total += 1
            continue
        for w in graph.neighbors(walk[-1]):
            if len(walk) >= 2 and w == walk[-2]:
                continue
            stack.append(walk + (w,))
    return total


def s_arc_count(graph: Graph, s: int) -> int:
    """``n k (k-1)^(s-1)`` for a ``k``-regular graph."""
    k = graph.valency
    if k is None:
        raise PreconditionError("s-arc counts by formula need a regular graph")
    if s == 0:
        return graph.n
    return graph.n * k * (k - 1) ** (s - 1)


def seed_s_arc(graph: Graph, s: int, start: int = 0) -> tuple:
    walk = [start]
    for _ in range(s):
        nxt = next(w for w in graph.neighbors(walk[-1]) if len(walk) < 2 or w != walk[-2])
        walk.append(nxt)
    return tuple(walk)


def s_arc_orbit_size(graph: Graph, g: PermGroup, arc: tuple, cap: int = ARC_ORBIT_CAP) -> int:
    """Size of the orbit of ``arc`` under ``g``, enumerated breadth first.

    Tuples are packed into integers and deduplicated with sorted arrays.
    Raises :class:`BoundExceededError` once the orbit passes ``cap``.
    """
    n = graph.n
    length = len(arc)
    if float(n) ** length >= 2**62:
        raise BoundExceededError("s-arc keys would overflow")
    weights = n ** np.arange(length, dtype=np.int64)
    gens = [x.array.astype(np.int64) for x in g.generators]
    frontier = np.array([arc], dtype=np.int64)
    seen = frontier @ weights
    while len(frontier):
        imgs = np.concatenate([a[frontier] for a in gens])
        keys, idx = np.unique(imgs @ weights, return_index=True)
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = imgs[idx[fresh]]
        seen = np.union1d(seen, keys[fresh])
        if len(seen) > cap:
            raise BoundExceededError(f"s-arc orbit exceeds {cap}")
    return len(seen)


def s_arc_orbit_size_by_stabilizer(g: PermGroup, arc: tuple) -> int:
    """``|G : G_(v0..vs)|`` from a stabilizer chain through the arc's vertices."""
    return g.order() // pointwise_stabilizer(g, list(dict.fromkeys(arc))).order()


@dataclass
class STransitivity:
    s: int
    certified_only: bool = False  # True when a memory cap stopped the search early
    orbit_sizes: dict = field(default_factory=dict)


def s_transitivity(graph: Graph, g: PermGroup, max_s: int = S_MAX,
                   cap: int = ARC_ORBIT_CAP) -> STransitivity:
    if not is_arc_transitive(graph, g):
        raise PreconditionError("the group is not arc-transitive")
    order = g.order()
    result = STransitivity(1)
    for s in range(2, max_s + 1):
        total = s_arc_count(graph, s)
        if total > order:
            return result
        arc = seed_s_arc(graph, s)
        try:
            size = s_arc_orbit_size(graph, g, arc, cap)
        except BoundExceededError:
            result.certified_only = True
            return result
        result.orbit_sizes[s] = size
        if size != total:
            return result
        result.s = s
    return result


def s_transitivity_degree(graph: Graph, g: PermGroup, max_s: int = S_MAX) -> int:
    """Largest ``s <= max_s`` such that ``g`` is transitive on s-arcs."""
    return s_transitivity(graph, g, max_s).s


# stabilizer profiles

def _pm(text: str, degree: int) -> Permutation:
    return Permutation.from_cycles(text, degree)


def _a4_a5_ext() -> PermGroup:
    base = direct_product(alternating(4), alternating(5))
    return PermGroup(base.generators + [_pm("(0 1)(4 5)", 9)])


REFERENCE_BUILDERS = {
    "Z5": lambda: cyclic(5),
    "D5": lambda: dihedral(5),
    "D10": lambda: dihedral(10),
    "F20": frobenius_f20,
    "F20xZ2": lambda: direct_product(frobenius_f20(), cyclic(2)),
    "A5": lambda: alternating(5),
    "S5": lambda: symmetric(5),
    "F20xZ4": lambda: direct_product(frobenius_f20(), cyclic(4)),
    "A4xA5": lambda: direct_product(alternating(4), alternating(5)),
    "S4xS5": lambda: direct_product(symmetric(4), symmetric(5)),
    "(A4xA5):Z2": _a4_a5_ext,
    "ASL(2,4)": lambda: affine_group_24("ASL"),
    "AGL(2,4)": lambda: affine_group_24("AGL"),
    "ASigmaL(2,4)": lambda: affine_group_24("ASigmaL"),
    "AGammaL(2,4)": lambda: affine_group_24("AGammaL"),
}

# s -> candidate stabilizer types (name, order) for connected pentavalent (G,s)-transitive graphs
STABILIZER_TYPES = {
    1: [("Z5", 5), ("D5", 10), ("D10", 20)],
    2: [("F20", 20), ("F20xZ2", 40), ("A5", 60), ("S5", 120)],
    3: [("F20xZ4", 80), ("A4xA5", 720), ("S4xS5", 2880), ("(A4xA5):Z2", 1440)],
    4: [("ASL(2,4)", 960), ("AGL(2,4)", 2880), ("ASigmaL(2,4)", 1920), ("AGammaL(2,4)", 5760)],
    5: [("Z2^6:GammaL(2,4)", 23040)],
}


def orders_for(s: int) -> set[int]:
    return {o for _, o in STABILIZER_TYPES.get(s, [])}


@dataclass
class StabilizerProfile:
    order: FactoredOrder
    element_order_histogram: dict | None
    is_abelian: bool
    derived_order: int
    matched_types: list
    vertex: int = 0

    def to_json(self) -> dict:
        return {
            "order": int(self.order),
            "factored_order": str(self.order),
            "element_order_histogram": (None if self.element_order_histogram is None else
                                        {str(k): v for k, v in sorted(self.element_order_histogram.items())}),
            "is_abelian": self.is_abelian,
            "derived_order": self.derived_order,
            "matched_types": list(self.matched_types),
            "consistent_with": ", ".join(self.matched_types) or "none",
        }


def _invariants(g: PermGroup, bound: int = HISTOGRAM_BOUND) -> tuple:
    order = g.order()
    hist = None
    if order <= bound:
        hist = dict(Counter(element_orders(g.element_array(bound)).tolist()))
    abelian = g.is_abelian()
    derived = 1 if abelian else derived_subgroup(g).order()
    return order, hist, abelian, derived


@lru_cache(maxsize=None)
def reference_invariants(name: str) -> tuple:
    order, hist, abelian, derived = _invariants(REFERENCE_BUILDERS[name]())
    return order, tuple(sorted(hist.items())), abelian, derived


def match_types(order: int, hist: dict | None, abelian: bool, derived: int) -> list[str]:
    """Every listed stabilizer type whose invariants agree with the given ones."""
    out = []
    for s, entries in STABILIZER_TYPES.items():
        for name, o in entries:
            if o != order:
                continue
            if name not in REFERENCE_BUILDERS:
                out.append(name)  # matched on order alone
                continue
            r_order, r_hist, r_ab, r_der = reference_invariants(name)
            if r_ab != abelian or r_der != derived:
                continue
            if hist is not None and tuple(sorted(hist.items())) != r_hist:
                continue
            out.append(name)
    return out


def stabilizer_profile(graph: Graph, g: PermGroup, v: int = 0) -> StabilizerProfile:
    _require_automorphisms(graph, g)
    stab = stabilizer(g, v)
    order, hist, abelian, derived = _invariants(stab)
    return StabilizerProfile(FactoredOrder.of(order), hist, abelian, derived,
                             match_types(order, hist, abelian, derived), v)


__all__ = [
    "DEFAULT_IR_MAX_VERTICES", "AutomorphismResult", "automorphism_search", "automorphism_group",
    "verify_automorphisms", "is_arc_transitive", "arc_permutations", "count_s_arcs",
    "s_arc_count", "seed_s_arc", "s_arc_orbit_size", "s_arc_orbit_size_by_stabilizer",
    "STransitivity", "s_transitivity", "s_transitivity_degree", "StabilizerProfile",
    "stabilizer_profile", "match_types", "STABILIZER_TYPES", "orders_for", "PROP23_BOUND",
]
