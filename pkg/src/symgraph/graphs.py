"""Simple undirected graphs and the constructions that produce them.

Cayley graphs, coset graphs, quotients by a group of automorphisms,
standard double covers and the dihedral family ``CD_m`` live here; the
catalogue of named graphs is in :mod:`symgraph.library`.
"""

from __future__ import annotations

import json
import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .atlas import RegularGroup, dihedral
from .cosets import CosetSpace
from .exceptions import (
    BoundExceededError,
    NotAMemberError,
    NotAutomorphismError,
    PreconditionError,
)
from .perm import DEFAULT_ENUM_BOUND, Permutation, PermGroup, _INDEX

ISOMORPHISM_MAX_VERTICES = 200


class Graph:
    """An immutable simple graph on ``0..n-1`` stored as sorted neighbor lists.

    ``labels`` optionally maps vertices back to what they stand for (group
    elements, cosets, pairs); ``meta`` holds the construction recipe and
    flags such as ``connected``; ``group`` is the group the construction
    hands over as acting on the vertices, when there is one.
    """

    __slots__ = ("_n", "_adj", "labels", "meta", "group", "_array")

    def __init__(self, n: int, adjacency: Sequence[Iterable[int]], labels=None,
                 meta: dict | None = None, group: PermGroup | None = None,
                 validate: bool = True):
        if n < 0 or len(adjacency) != n:
            raise ValueError("adjacency must have one entry per vertex")
        adj = tuple(tuple(sorted(int(v) for v in row)) for row in adjacency)
        if validate:
            _validate(n, adj)
        self._n = n
        self._adj = adj
        self.labels = labels
        self.meta = dict(meta or {})
        self.group = group
        self._array: np.ndarray | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], **kwargs) -> Graph:
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, adj, **kwargs)

    @classmethod
    def from_array(cls, nbrs: np.ndarray, **kwargs) -> Graph:
        """Build from an ``(n, k)`` neighbor array (a regular graph)."""
        return cls(len(nbrs), nbrs.tolist(), **kwargs)

    # basic queries

    @property
    def n(self) -> int:
        return self._n

    vertex_count = n

    @property
    def adjacency(self) -> tuple:
        return self._adj

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        row = self._adj[u]
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def degrees(self) -> list[int]:
        return [len(r) for r in self._adj]

    @property
    def valency(self) -> int | None:
        """The common degree, or None for an irregular graph."""
        degs = set(self.degrees())
        if len(degs) == 1:
            return degs.pop()
        return 0 if not degs else None

    def is_regular(self) -> bool:
        return self.valency is not None

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, row in enumerate(self._adj) for v in row if u < v]

    def neighbor_array(self) -> np.ndarray:
        """The ``(n, k)`` array of sorted neighbor lists of a regular graph."""
        if self._array is None:
            if self.valency is None:
                raise PreconditionError("neighbor arrays need a regular graph")
            arr = np.array(self._adj, dtype=_INDEX).reshape(self._n, self.valency)
            arr.setflags(write=False)
            self._array = arr
        return self._array

    def adjacency_matrix(self) -> csr_matrix:
        rows = np.repeat(np.arange(self._n), self.degrees())
        cols = np.fromiter((v for r in self._adj for v in r), dtype=np.int64,
                           count=int(sum(self.degrees())))
        return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                          shape=(self._n, self._n))

    def components(self) -> list[list[int]]:
        if self._n == 0:
            return []
        _, labels = connected_components(self.adjacency_matrix(), directed=False)
        comps: dict[int, list[int]] = {}
        for v, c in enumerate(labels.tolist()):
            comps.setdefault(c, []).append(v)
        return sorted(comps.values(), key=lambda c: c[0])

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_bipartite(self) -> bool:
        side = [-1] * self._n
        for s in range(self._n):
            if side[s] >= 0:
                continue
            side[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self._adj[u]:
                    if side[v] < 0:
                        side[v] = 1 - side[u]
                        queue.append(v)
                    elif side[v] == side[u]:
                        return False
        return True

    def distance_profile(self, v: int) -> tuple:
        """Numbers of vertices at distance 0, 1, 2, ... from ``v``."""
        dist = {v: 0}
        queue = deque([v])
        counts = [1]
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in dist:
                    d = dist[u] + 1
                    dist[w] = d
                    if d == len(counts):
                        counts.append(0)
                    counts[d] += 1
                    queue.append(w)
        return tuple(counts)

    # symmetry helpers

    def is_automorphism(self, p: Permutation) -> bool:
        if p.degree != self._n:
            return False
        a = p.array
        if self.valency is not None and self._n:
            nbrs = self.neighbor_array()
            return bool((np.sort(a[nbrs], axis=1) == nbrs[a]).all())
        edges = {(u, v) for u, row in enumerate(self._adj) for v in row}
        return all((int(a[u]), int(a[v])) in edges for u, v in edges)

    def relabel(self, p: Permutation) -> Graph:
        """The isomorphic graph with vertex ``v`` renamed ``p(v)``."""
        a = p.array
        adj: list = [None] * self._n
        for v, row in enumerate(self._adj):
            adj[int(a[v])] = [int(a[w]) for w in row]
        return Graph(self._n, adj, meta={"relabeled_from": self.meta.get("name")},
                     validate=False)

    # serialization

    def to_json(self) -> dict:
        return {"n": self._n, "edges": [list(e) for e in self.edges()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict | str) -> Graph:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(int(data["n"]), data["edges"])

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())

    @classmethod
    def from_edge_list(cls, text: str, n: int | None = None) -> Graph:
        edges = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                u, v = line.split()[:2]
                edges.append((int(u), int(v)))
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls.from_edges(n, edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        name = self.meta.get("name")
        label = f" {name}" if name else ""
        return f"<Graph{label} n={self._n} edges={self.edge_count}>"


def _validate(n: int, adj: tuple):
    for u, row in enumerate(adj):
        for i, v in enumerate(row):
            if not 0 <= v < n:
                raise ValueError(f"neighbor {v} of {u} out of range")
            if v == u:
                raise ValueError(f"loop at vertex {u}")
            if i and row[i - 1] == v:
                raise ValueError(f"duplicate neighbor {v} of {u}")
    for u, row in enumerate(adj):
        for v in row:
            r = adj[v]
            i = int(np.searchsorted(r, u))
            if i == len(r) or r[i] != u:
                raise ValueError(f"edge ({u}, {v}) is not symmetric")


# constructions

def cayley(g: RegularGroup, s: Sequence[Permutation], name: str | None = None) -> Graph:
    """``Cay(G, S)``: vertices are the elements of ``g``, with ``x ~ sx``.

    ``g`` acts regularly and point ``p`` stands for the element sending
    ``0`` to ``p``, so the generators of ``g`` (acting by right
    multiplication) are automorphisms of the result, which is recorded as
    ``graph.group``.
    """
    if not isinstance(g, RegularGroup):
        g = RegularGroup(g.generators, g.degree)
    s = list(dict.fromkeys(s))
    for x in s:
        if x.degree != g.degree:
            raise NotAMemberError("connection set element of the wrong degree")
        if x.is_identity():
            raise PreconditionError("the connection set contains the identity")
    table = g._element_table()
    for x in s:
        if not np.array_equal(table[x(0)], x.array):
            raise NotAMemberError(f"{x.cycle_string()} is not an element of the group")
    points = {x(0) for x in s}
    for x in s:
        if x.inverse()(0) not in points:
            raise PreconditionError("the connection set is not closed under inverses")
    # the neighbors of x are the points of sx, i.e. x applied to the point of s
    cols = np.array(sorted(points), dtype=_INDEX)
    nbrs = np.sort(table[:, cols], axis=1)
    graph = Graph.from_array(nbrs, group=g, validate=False,
                             meta={"name": name, "recipe": f"Cay({g.name or 'G'}, S), |S| = {len(s)}"})
    graph.meta["connected"] = graph.is_connected()
    return graph


def coset_graph(g: PermGroup, h: PermGroup, d: Permutation | Sequence[Permutation],
                bound: int = DEFAULT_ENUM_BOUND, name: str | None = None,
                space: CosetSpace | None = None) -> Graph:
    """``Cos(G, H, D)`` with ``D = HdH ∪ Hd⁻¹H``.

    Vertices are the right cosets of ``h`` numbered as the coset space finds
    them (``H`` itself is vertex 0); ``Hx ~ Hyx`` for ``y`` in ``D``.  The
    action of ``g`` on the cosets is stored as ``graph.group``.  A list of
    representatives gives the union of their double cosets.
    """
    reps = [d] if isinstance(d, Permutation) else list(d)
    if not reps:
        raise ValueError("at least one double coset representative is needed")
    for x in reps:
        if not g.contains(x):
            raise NotAMemberError(f"{x.cycle_string()} is not in the group")
        if h.contains(x):
            raise PreconditionError("d lies in H, which would give loops")
    if space is None:
        space = CosetSpace(g, h, bound=bound)
    base = set()
    for x in reps:
        base.update(space.double_coset_cosets(x))
        base.update(space.double_coset_cosets(x.inverse()))
    base_row = np.array(sorted(base), dtype=_INDEX)
    nbrs = np.empty((space.size, len(base_row)), dtype=_INDEX)
    nbrs[0] = base_row
    action = [p.array for p in space.action_permutations()]
    # neighbors of Hxs are the neighbors of Hx moved by s
    for i in range(1, space.size):
        nbrs[i] = action[space.parent_gen[i]][nbrs[space.parent[i]]]
    nbrs.sort(axis=1)
    group = PermGroup(space.action_permutations(), space.size, name=g.name)
    graph = Graph.from_array(nbrs, group=group, validate=space.size <= 5000,
                             meta={"name": name,
                                   "recipe": f"Cos({g.name or 'G'}, {h.name or 'H'}, HdH)",
                                   "double_coset_ratio": len(base_row)})
    graph.meta["connected"] = graph.is_connected()
    return graph


@dataclass
class QuotientResult:
    quotient: Graph
    block_map: np.ndarray
    is_normal_cover: bool
    blocks: list = field(default_factory=list)

    def induced(self, g: PermGroup) -> PermGroup:
        """The action on the blocks of a group that permutes them."""
        reps = [b[0] for b in self.blocks]
        perms = []
        for x in g.generators:
            img = self.block_map[x.array[reps]]
            if len(set(img.tolist())) != len(reps):
                raise PreconditionError("the group does not permute the blocks")
            perms.append(Permutation._wrap(img.astype(_INDEX)))
        return PermGroup(perms, len(reps))


def quotient(graph: Graph, n: PermGroup, allow_degenerate: bool = False) -> QuotientResult:
    """The quotient graph ``Γ_N``: blocks are the ``N``-orbits, joined when an edge joins them."""
    if n.degree != graph.n:
        raise PreconditionError("group degree differs from the vertex count")
    for x in n.generators:
        if not graph.is_automorphism(x):
            raise NotAutomorphismError(f"{x.cycle_string()} is not an automorphism")
    blocks = n.orbits()
    if len(blocks) <= 2 and not allow_degenerate:
        raise PreconditionError(f"degenerate quotient: the group has {len(blocks)} orbit(s)")
    block_map = np.empty(graph.n, dtype=np.int64)
    for i, b in enumerate(blocks):
        block_map[b] = i
    edges = {(int(block_map[u]), int(block_map[v])) for u, v in graph.edges()}
    q = Graph.from_edges(len(blocks), ((a, b) for a, b in edges if a != b),
                         meta={"name": f"{graph.meta.get('name') or 'graph'}/N"})
    src = graph.valency
    cover = src is not None and q.valency == src
    return QuotientResult(q, block_map, cover, blocks)


def double_cover(graph: Graph) -> Graph:
    """Standard double cover: ``(u, i) ~ (v, 1 - i)`` for each edge, ``(u, i)`` numbered ``u + i n``."""
    n = graph.n
    adj = [[v + n for v in row] for row in graph.adjacency]
    adj += [list(row) for row in graph.adjacency]
    labels = [(u, i) for i in range(2) for u in range(n)]
    cover = Graph(2 * n, adj, labels=labels, validate=False,
                  meta={"name": f"{graph.meta.get('name') or 'graph'}^(2)",
                        "recipe": "standard double cover"})
    cover.meta["connected"] = cover.is_connected()
    return cover


def cyclotomic_roots(m: int) -> list[int]:
    """All ``r`` in ``Z_m`` with ``r^4 + r^3 + r^2 + r + 1 = 0``."""
    if m < 2:
        raise ValueError("m must be at least 2")
    r = np.arange(m, dtype=object)
    vals = (r**4 + r**3 + r**2 + r + 1) % m
    return [int(x) for x in r[vals == 0]]


def cd_exponents(m: int, r: int) -> list[int]:
    return [0, 1, (r + 1) % m, (r * r + r + 1) % m, (r**3 + r * r + r + 1) % m]


def cd_family(m: int, root: int | None = None) -> Graph:
    """``CD_m = Cay(D_m, {b, ab, a^(r+1)b, a^(r^2+r+1)b, a^(r^3+r^2+r+1)b})``."""
    roots = cyclotomic_roots(m)
    if not roots:
        raise PreconditionError(f"x^4+x^3+x^2+x+1 has no root modulo {m}")
    if root is None:
        root = roots[0]
    elif root % m not in roots:
        raise PreconditionError(f"{root} is not a root modulo {m}")
    root %= m
    d = dihedral(m)
    s = [d.element(e, 1) for e in cd_exponents(m, root)]
    graph = cayley(d, s, name=f"CD_{m}")
    graph.meta["root"] = root
    graph.meta["roots"] = roots
    graph.meta["recipe"] = f"Cay(D_{m}, {{a^e b : e in {cd_exponents(m, root)}}}), r = {root}"
    return graph


# isomorphism

def is_isomorphic(a: Graph, b: Graph, max_vertices: int = ISOMORPHISM_MAX_VERTICES) -> bool:
    return find_isomorphism(a, b, max_vertices) is not None


def find_isomorphism(a: Graph, b: Graph,
                     max_vertices: int = ISOMORPHISM_MAX_VERTICES) -> list[int] | None:
    """A bijection ``f`` with ``u ~ v`` iff ``f(u) ~ f(v)``, or None.

    Plain backtracking: vertices of ``a`` are mapped in breadth-first order
    so that each new vertex (after the first of its component) has an
    already mapped neighbor, which limits its candidates to the unmapped
    neighbors of that neighbor's image.  Candidates must share the distance
    profile and be adjacent to exactly the images of the mapped neighbors.
    """
    if max(a.n, b.n) > max_vertices:
        raise BoundExceededError(f"isomorphism testing is limited to {max_vertices} vertices")
    if a.n != b.n or a.edge_count != b.edge_count:
        return None
    if sorted(a.degrees()) != sorted(b.degrees()):
        return None
    n = a.n
    if n == 0:
        return []
    inv_a = [a.distance_profile(v) for v in range(n)]
    inv_b = [b.distance_profile(v) for v in range(n)]
    if sorted(inv_a) != sorted(inv_b):
        return None

    order, anchor = [], []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        order.append(s)
        anchor.append(-1)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in a.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    order.append(w)
                    anchor.append(u)
                    queue.append(w)

    f = [-1] * n
    used = [False] * n
    adj_b = [set(r) for r in b.adjacency]

    def consistent(u: int, x: int) -> bool:
        mapped = 0
        for w in a.neighbors(u):
            if f[w] >= 0:
                if f[w] not in adj_b[x]:
                    return False
                mapped += 1
        return mapped == sum(1 for y in b.neighbors(x) if used[y])

    def search(i: int) -> bool:
        if i == n:
            return True
        u = order[i]
        cands = range(n) if anchor[i] < 0 else b.neighbors(f[anchor[i]])
        for x in cands:
            if used[x] or inv_b[x] != inv_a[u] or not consistent(u, x):
                continue
            f[u] = x
            used[x] = True
            if search(i + 1):
                return True
            f[u] = -1
            used[x] = False
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, n + 100))
    try:
        return list(f) if search(0) else None
    finally:
        sys.setrecursionlimit(limit)


def complete_graph(n: int) -> Graph:
    return Graph(n, [[v for v in range(n) if v != u] for u in range(n)],
                 meta={"name": f"K{n}"})


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], meta={"name": f"C{n}"})


__all__ = [
    "Graph", "QuotientResult", "cayley", "coset_graph", "quotient", "double_cover",
    "cyclotomic_roots", "cd_exponents", "cd_family", "is_isomorphic", "find_isomorphism",
    "complete_graph", "cycle_graph",
]
