"""Right cosets of a subgroup and the action of the group on them.

A coset ``Hx`` is identified by a canonical key: the lexicographically
smallest image of a base of ``G`` under the elements of ``Hx``.  Because a
base determines an element, two cosets share a key exactly when they are
equal, whatever ``H`` is.
"""

from __future__ import annotations

import numpy as np

from .exceptions import NotAMemberError
from .perm import DEFAULT_ENUM_BOUND, Permutation, PermGroup, _INDEX


class CosetSpace:
    """The right cosets ``[G:H]``, numbered in discovery order from ``H`` itself."""

    def __init__(self, g: PermGroup, h: PermGroup, bound: int = DEFAULT_ENUM_BOUND,
                 check: bool = True):
        if check:
            for x in h.generators:
                if not g.contains(x):
                    raise NotAMemberError(f"{x.cycle_string()} is not in the ambient group")
        self.g = g
        self.h = h
        base = list(g.bsgs.base) or [0]
        self._base = base
        h_elems = h.element_array(bound)
        self._pattern = h_elems[:, base]
        deg = g.degree
        if deg ** len(base) < 2**62:
            self._weights = deg ** np.arange(len(base), dtype=np.int64)
        else:
            self._weights = None
        self.keys: list = []
        self.reps: list[np.ndarray] = []
        self.index: dict = {}
        self.parent: list[int] = []
        self.parent_gen: list[int] = []
        self._action: list[np.ndarray] | None = None
        self._enumerate()

    def key(self, x: np.ndarray):
        imgs = x[self._pattern]
        if self._weights is not None:
            return int((imgs.astype(np.int64) @ self._weights).min())
        return min(map(tuple, imgs.tolist()))

    def _enumerate(self):
        ident = np.arange(self.g.degree, dtype=_INDEX)
        gens = [s.array for s in self.g.generators]
        k0 = self.key(ident)
        self.keys.append(k0)
        self.reps.append(ident)
        self.index[k0] = 0
        self.parent.append(-1)
        self.parent_gen.append(-1)
        action = [[] for _ in gens]
        i = 0
        while i < len(self.reps):
            x = self.reps[i]
            for j, s in enumerate(gens):
                y = s[x]
                k = self.key(y)
                t = self.index.get(k)
                if t is None:
                    t = len(self.reps)
                    self.index[k] = t
                    self.keys.append(k)
                    self.reps.append(y)
                    self.parent.append(i)
                    self.parent_gen.append(j)
                action[j].append(t)
            i += 1
        self._action = [np.array(a, dtype=_INDEX) for a in action]

    @property
    def size(self) -> int:
        return len(self.reps)

    def coset_of(self, x: Permutation | np.ndarray) -> int:
        a = x.array if isinstance(x, Permutation) else x
        return self.index[self.key(a)]

    def action_permutations(self) -> list[Permutation]:
        """Images of the generators of ``G`` acting on the cosets by right multiplication."""
        return [Permutation._wrap(a) for a in self._action]

    def action_group(self) -> PermGroup:
        return PermGroup(self.action_permutations())

    def act(self, x: Permutation) -> Permutation:
        """The permutation of the cosets induced by an arbitrary element of ``G``."""
        xa = x.array
        return Permutation._wrap(np.array([self.index[self.key(xa[r])] for r in self.reps],
                                          dtype=_INDEX))

    def double_coset_ratio(self, d: Permutation, cap: int | None = None) -> int:
        """``|HdH|/|H|``, the length of the ``H``-orbit of the coset ``Hd``.

        With ``cap`` set, the count stops once it exceeds ``cap``.
        """
        start = d.array
        seen = {self.key(start): start}
        frontier = [start]
        hgens = [s.array for s in self.h.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for s in hgens:
                    y = s[x]
                    k = self.key(y)
                    if k not in seen:
                        seen[k] = y
                        nxt.append(y)
                        if cap is not None and len(seen) > cap:
                            return len(seen)
            frontier = nxt
        return len(seen)

    def double_coset_cosets(self, d: Permutation) -> list[int]:
        """Indices of the cosets making up ``HdH``."""
        start = d.array
        out = {self.coset_of(start)}
        frontier = [start]
        hgens = [s.array for s in self.h.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for s in hgens:
                    y = s[x]
                    k = self.coset_of(y)
                    if k not in out:
                        out.add(k)
                        nxt.append(y)
            frontier = nxt
        return sorted(out)


def double_coset_ratio_by_counting(g: PermGroup, h: PermGroup, d: Permutation,
                                   bound: int = 10**5) -> int:
    """``|HdH|/|H|`` by listing the elements of ``HdH`` explicitly."""
    h_elems = h.element_array(bound)
    da = d.array
    left = da[h_elems]                      # h then d, i.e. the elements h*d
    prods = h_elems[:, left].reshape(-1, g.degree)  # (h*d) then h'
    distinct = np.unique(prods, axis=0)
    return len(distinct) // len(h_elems)
