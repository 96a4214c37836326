"""Named pentavalent symmetric graphs, each built from its group-theoretic recipe.

``named("G66")`` returns the graph with its recipe in ``graph.meta`` and,
where the construction provides one, the arc-transitive group it was built
from in ``graph.group``.  Builds are cached, so repeated calls are cheap
and return the same object.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Callable

from .atlas import (
    DEFAULT_SEED,
    alternating,
    cyclic,
    find_double_coset_element,
    find_subgroup,
    presented_group,
    projective_linear,
    psl34_with_duality,
)
from .exceptions import UnimplementedGraphError
from .graphs import Graph, cayley, cd_family, coset_graph, double_cover
from .perm import (
    Permutation,
    PermGroup,
    centralizer_of_element,
    element_orders,
    stabilizer,
)

G32_RELATORS = "a^4, b^2, c^2, d^2, [a,c], [a,d], a^b = a^-1, b^c = b a^2, b^d = b a^2, c^d = c a^2"

PRESENTATIONS = {
    "Q5": ("gens: a b c d e; rels: a^2, b^2, c^2, d^2, e^2, [a,b], [a,c], [a,d], [a,e], "
           "[b,c], [b,d], [b,e], [c,d], [c,e], [d,e]",
           ["a", "b", "c", "d", "e"]),
    "FQ4": ("gens: a b c d; rels: a^2, b^2, c^2, d^2, [a,b], [a,c], [a,d], [b,c], [b,d], [c,d]",
            ["a", "b", "c", "d", "abcd"]),
    "G32": (f"gens: a b c d; rels: {G32_RELATORS}",
            ["b", "ba", "c", "d", "cda"]),
    "G64_1": (f"gens: a b c d e; rels: {G32_RELATORS}, e^2, [a,e], [b,e], [c,e], [d,e]",
              ["b", "c", "d", "ab", "acde"]),
    "G64_2": ("gens: a b c d e; rels: a^4, b^2, c^2, d^2, e^2, [a,b], [a,c], [a,d], [a,e], "
              "[b,c], [c,e], [d,e], b^d = b a^2, b^e = b a^2, c^d = c a^2",
              ["b", "c", "d", "e", "abcde"]),
    "K66_minus_matching": ("gens: a b; rels: a^2, b^6, [a,b]",
                           ["ab", "ab^2", "ab^3", "ab^4", "ab^5"]),
}

# (group kind, q, subgroup) for the coset graphs Cos(PSL/PGL(2,q), H, HgH)
PROJECTIVE_LINE_GRAPHS = {
    "G66": ("psl", 11, "D5"),
    "G114": ("pgl", 19, "A5"),
    "G406": ("pgl", 29, "A5"),
    "G574": ("psl", 41, "A5"),
    "G3422": ("pgl", 59, "A5"),
    "G3782": ("pgl", 61, "A5"),
}

CD_GRAPHS = {"CD_11": 11, "CD_31": 31, "CD_41": 41}

STRETCH = ("G108", "G170")


def _presented(name: str) -> Graph:
    text, conn = PRESENTATIONS[name]
    g = presented_group(text)
    g.name = name
    graph = cayley(g, [g.word(w) for w in conn], name=name)
    graph.meta["recipe"] = f"Cay(<{text}>, {{{', '.join(conn)}}})"
    return graph


def _k6() -> Graph:
    g = cyclic(6)
    graph = cayley(g, [g.element_at(i) for i in range(1, 6)], name="K6")
    graph.meta["recipe"] = "Cay(Z6, Z6 - {0})"
    return graph


def _k55() -> Graph:
    graph = cd_family(5)
    graph.meta["name"] = "K55"
    return graph


def _i12(seed: int) -> Graph:
    g = alternating(5)
    g.name = "A5"
    h = PermGroup([Permutation.from_cycles("(0 1 2 3 4)", 5)], name="Z5")
    d = find_double_coset_element(g, h, order=2, ratio=5, seed=seed)
    return coset_graph(g, h, d, name="I12")


def _i12_double(seed: int) -> Graph:
    graph = double_cover(named("I12", seed=seed))
    graph.meta["name"] = "I12_double"
    return graph


def _g36(seed: int) -> Graph:
    g = alternating(6)
    g.name = "A6"
    h = find_subgroup(g, "sylow-normalizer:5", seed=seed)
    h.name = "N(P)"
    x = next(t for t in h.elements() if t.order() == 2)
    c = centralizer_of_element(g, x)
    elems = c.element_array()
    cands = [Permutation._wrap(r) for r in elems[element_orders(elems) == 4]]
    d = find_double_coset_element(g, h, order=4, ratio=5, candidates=cands, seed=seed)
    graph = coset_graph(g, h, d, name="G36")
    graph.meta["recipe"] = "Cos(A6, N(P), HgH), P Sylow 5, g of order 4 centralizing an involution of H"
    return graph


def _g42(seed: int) -> Graph:
    g = psl34_with_duality()
    g.name = "PSL(3,4).2"
    h = stabilizer(g, 0)
    h.name = "2^4:A5"
    d = find_double_coset_element(g, h, order=2, ratio=5, seed=seed)
    graph = coset_graph(g, h, d, name="G42")
    graph.meta["recipe"] = "Cos(PSL(3,4) extended by a graph automorphism, 2^4:A5, HgH)"
    return graph


def _projective(name: str, seed: int) -> Graph:
    kind, q, sub = PROJECTIVE_LINE_GRAPHS[name]
    g = projective_linear(q, kind)
    g.name = f"{kind.upper()}(2,{q})"
    h = find_subgroup(g, sub, seed=seed)
    h.name = sub
    d = find_double_coset_element(g, h, order=2, ratio=5, seed=seed)
    return coset_graph(g, h, d, name=name)


def _builders() -> dict[str, Callable[[int], Graph]]:
    table: dict[str, Callable[[int], Graph]] = {
        "K6": lambda seed: _k6(),
        "K55": lambda seed: _k55(),
        "K66_minus_matching": lambda seed: _presented("K66_minus_matching"),
        "I12": _i12,
        "I12_double": _i12_double,
        "G36": _g36,
        "G42": _g42,
    }
    for name in ("Q5", "FQ4", "G32", "G64_1", "G64_2"):
        table[name] = lambda seed, name=name: _presented(name)
    for name in PROJECTIVE_LINE_GRAPHS:
        table[name] = lambda seed, name=name: _projective(name, seed)
    for name, m in CD_GRAPHS.items():
        table[name] = lambda seed, m=m: cd_family(m)
    return table


BUILDERS = _builders()
NAMES = tuple(BUILDERS)


def canonical_name(name: str) -> str:
    m = re.fullmatch(r"CD[:_](\d+)", name)
    if m:
        return f"CD_{int(m.group(1))}"
    return name


@lru_cache(maxsize=None)
def _build(name: str, seed: int) -> Graph:
    m = re.fullmatch(r"CD_(\d+)", name)
    if name in BUILDERS:
        graph = BUILDERS[name](seed)
    elif m:
        graph = cd_family(int(m.group(1)))
    else:
        raise KeyError(f"unknown graph {name!r}")
    graph.meta["name"] = name
    graph.meta["seed"] = seed
    return graph


def named(name: str, stretch: bool = False, seed: int = DEFAULT_SEED) -> Graph:
    """The named graph ``name``; ``CD:m`` / ``CD_m`` give any member of the ``CD`` family."""
    name = canonical_name(name)
    if name in STRETCH:
        raise UnimplementedGraphError(
            f"{name} is a stretch construction and is not implemented"
            + ("" if stretch else " (enable it with the stretch flag)"))
    return _build(name, seed)


__all__ = ["named", "NAMES", "STRETCH", "PRESENTATIONS", "PROJECTIVE_LINE_GRAPHS",
           "CD_GRAPHS", "canonical_name"]
