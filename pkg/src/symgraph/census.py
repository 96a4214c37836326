"""Verification harness: basicness, normal quotients and the expected-value census.

Each :class:`CensusEntry` carries the published facts about one graph
(order, s, automorphism group order, basicness) with a short quotation of
the claim it rests on.  :func:`run_census` rebuilds every graph, measures
the same quantities and reports expected against computed.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .atlas import DEFAULT_SEED
from .exceptions import PreconditionError, SymgraphError, UnimplementedGraphError
from .graphs import Graph, QuotientResult, quotient
from .library import named
from .perm import (
    DEFAULT_MINIMAL_NORMAL_BOUND,
    PermGroup,
    is_normal,
    is_semiregular,
    minimal_normal_subgroups,
    stabilizer,
)
from .symmetry import (
    DEFAULT_IR_MAX_VERTICES,
    PROP23_BOUND,
    STABILIZER_TYPES,
    automorphism_search,
    is_arc_transitive,
    orders_for,
    s_transitivity_degree,
    stabilizer_profile,
    verify_automorphisms,
)

FULL_AUT = "full-aut"
CONTAINMENT = "containment-only"


# basicness and normal quotients

@dataclass
class BasicnessResult:
    basic: bool
    witness: PermGroup | None = None
    quotient: QuotientResult | None = None
    relative: bool = False  # decided against a subgroup of Aut, so "basic" is not certain
    sampled: bool = False  # minimal normal subgroups came from sampling

    def __bool__(self) -> bool:
        return self.basic


def is_basic(graph: Graph, aut: PermGroup, full: bool = True,
             bound: int = DEFAULT_MINIMAL_NORMAL_BOUND) -> BasicnessResult:
    """Decide basicness from the minimal normal subgroups of ``aut``.

    The graph is non-basic exactly when some minimal normal subgroup has at
    least three orbits: any normal subgroup with that many orbits contains a
    minimal one, whose orbits refine its own.  With ``full=False`` the group
    is only known to lie in ``Aut`` and a "basic" answer is flagged relative.
    """
    mins = minimal_normal_subgroups(aut, bound=bound)
    for n in mins:
        if len(n.orbits()) >= 3:
            return BasicnessResult(False, n, quotient(graph, n), not full, mins.sampled)
    return BasicnessResult(True, None, None, not full, mins.sampled)


@dataclass
class QuotientNode:
    graph: Graph
    group: PermGroup
    children: list = field(default_factory=list)  # (edge label, QuotientResult, QuotientNode)
    truncated: bool = False
    note: str = ""

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def to_json(self) -> dict:
        return {
            "n": self.graph.n,
            "group_order": self.group.order(),
            "truncated": self.truncated,
            "note": self.note,
            "children": [{"edge": label, "normal_subgroup_order": res.quotient.meta.get("n_order"),
                          "node": child.to_json()} for label, res, child in self.children],
        }


def normal_quotient_tree(graph: Graph, aut: PermGroup, depth: int = 1,
                         bound: int = DEFAULT_MINIMAL_NORMAL_BOUND) -> QuotientNode:
    """Quotients by the minimal normal subgroups with at least three orbits, recursively.

    Children act with the group induced on the blocks.  Nodes whose minimal
    normal subgroups cannot be computed within ``bound`` are truncated.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    node = QuotientNode(graph, aut)
    try:
        mins = minimal_normal_subgroups(aut, bound=bound)
    except SymgraphError as exc:
        node.truncated = True
        node.note = str(exc)
        return node
    for n in mins:
        if len(n.orbits()) < 3:
            continue
        res = quotient(graph, n)
        res.quotient.meta["n_order"] = n.order()
        label = "normal-cover" if res.is_normal_cover else "valency-drop"
        induced = res.induced(aut)
        if depth > 1:
            child = normal_quotient_tree(res.quotient, induced, depth - 1, bound)
        else:
            child = QuotientNode(res.quotient, induced)
        node.children.append((label, res, child))
    return node


# checks of the structural propositions

def _require_pentavalent_arc_transitive(graph: Graph, g: PermGroup):
    if graph.valency != 5:
        raise PreconditionError("the graph is not pentavalent")
    if not is_arc_transitive(graph, g):
        raise PreconditionError("the group is not arc-transitive")


def prop23_details(graph: Graph, g: PermGroup) -> dict:
    _require_pentavalent_arc_transitive(graph, g)
    s = s_transitivity_degree(graph, g)
    order = stabilizer(g, 0).order()
    return {
        "s": s,
        "stabilizer_order": order,
        "divides_bound": PROP23_BOUND % order == 0,
        "listed": order in orders_for(s),
        "candidates": [name for name, o in STABILIZER_TYPES.get(s, []) if o == order],
    }


def check_prop23(graph: Graph, g: PermGroup) -> bool:
    """``s <= 5``, ``|G_v|`` divides ``2^9 3^2 5`` and ``(s, |G_v|)`` is a listed pair."""
    d = prop23_details(graph, g)
    return d["s"] <= 5 and d["divides_bound"] and d["listed"]


def check_prop25(graph: Graph, g: PermGroup, n: PermGroup) -> bool:
    """A normal subgroup with at least three orbits is semiregular, and the
    quotient is connected, pentavalent and arc-transitive under ``G/N``."""
    _require_pentavalent_arc_transitive(graph, g)
    if not n.is_subgroup_of(g) or not is_normal(g, n):
        raise PreconditionError("n is not a normal subgroup of g")
    if len(n.orbits()) < 3:
        raise PreconditionError(f"n has {len(n.orbits())} orbits; at least three are required")
    if not is_semiregular(n):
        return False
    res = quotient(graph, n)
    q = res.quotient
    if not q.is_connected() or q.valency != 5:
        return False
    return is_arc_transitive(q, res.induced(g))


# census

@dataclass(frozen=True)
class CensusEntry:
    name: str
    expected_order: int
    expected_s: int
    expected_aut_order: int
    expected_basic: bool | None
    verification_level: str = FULL_AUT
    expected_valency: int = 5
    construction_recipe: str = ""
    citation: str = ""
    stretch: bool = False

    @property
    def expected_stabilizer_order(self) -> int:
        return self.expected_aut_order // self.expected_order

    def recipe(self) -> str:
        return self.construction_recipe or self.name


def _e(name, n, s, aut, basic, cite, level=FULL_AUT, stretch=False):
    return CensusEntry(name, n, s, aut, basic, level, 5, name, cite, stretch)


# Quoted claims; "(derived)" marks values computed from the quoted ones
ENTRIES: tuple[CensusEntry, ...] = (
    _e("K6", 6, 2, 720, True, '"K6 ... S6"; basic; s from |S6|/6 = 120 = |S5| (derived)'),
    _e("K55", 10, 3, 28800, True,
       '"K_{5,5} ... (S5 x S5) x| Z2"; basic; s from stabilizer order 2880 (derived)'),
    _e("CD_11", 22, 2, 1320, True, '"PGL(2,11)" for m = 11; s from stabilizer order 60 (derived)'),
    _e("CD_31", 62, 1, 310, True, '"Aut(CD_m) = D_m x| Z5" for m >= 31; s from stabilizer order 5 (derived)'),
    _e("CD_41", 82, 1, 410, True, '"Aut(CD_m) = D_m x| Z5" for m >= 31; s from stabilizer order 5 (derived)'),
    _e("K66_minus_matching", 12, 2, 1440, False,
       '"Aut(K_{6,6}-6K_2) = S6 x Z2"; "basic except for K_{6,6}-6K2 and I_12"'),
    _e("I12", 12, 1, 120, False, '"Aut(I_12) = A5 x Z2"; "basic except for K_{6,6}-6K2 and I_12"'),
    _e("I12_double", 24, 2, 480, False,
       '"I_12^(2) is 2-transitive", "A5 x| D4"; non-basic via the central Z2 of the cover (derived)'),
    _e("G36", 36, 2, 1440, True, '"pentavalent 2-transitive graph of order 36", "Aut(A6)"'),
    _e("G42", 42, 4, 241920, True,
       '"pentavalent 4-transitive graph of order 42", "Aut(PSL(3,4))"; order 42 * 5760 (derived)'),
    _e("G66", 66, 1, 1320, True, '"PSL(2,11) D5 G66 1 PGL(2,11)"'),
    _e("G114", 114, 2, 6840, True, '"PGL(2,19) A5 G114 2 PGL(2,19)"; 19*18*20 (derived)'),
    _e("Q5", 32, 2, 3840, False,
       '"Aut(Q5) = Z2^5 x| S5"; s from stabilizer order 120; non-basic via the antipodal Z2 (derived)'),
    _e("FQ4", 16, 2, 1920, True,
       '"Aut(FQ4) = Z2^4 x| S5"; s from stabilizer order 120; Z2^4 is the only minimal normal subgroup (derived)'),
    _e("G32", 32, 2, 1920, False, '"2-transitive", "Aut(G32) = G32 x| A5"; "a normal Z2-cover of FQ4"'),
    _e("G64_1", 64, 2, 7680, False,
       '"Aut = G64^1 x| S5"; s from stabilizer order 120; non-basic as G32 x Z2 (derived)'),
    _e("G64_2", 64, 1, 640, False,
       '"Aut = G64^2 x| D5"; s from stabilizer order 10; non-basic (derived)'),
    _e("G406", 406, 2, 24360, True, '"PGL(2,29) A5 G406 2 PGL(2,29)"; 29*28*30 (derived)', CONTAINMENT),
    _e("G574", 574, 2, 34440, True, '"PSL(2,41) A5 G574 2 PSL(2,41)"; 41*40*42/2 (derived)', CONTAINMENT),
    _e("G3422", 3422, 2, 205320, True, '"PGL(2,59) A5 G3422 2 PGL(2,59)"; 59*58*60 (derived)', CONTAINMENT),
    _e("G3782", 3782, 2, 226920, True, '"PGL(2,61) A5 G3782 2 PGL(2,61)"; 61*60*62 (derived)', CONTAINMENT),
    _e("G108", 108, 2, 4320, True, '"pentavalent 2-transitive graph of order 108", "Z3.Aut(A6)"',
       stretch=True),
    _e("G170", 170, 5, 3916800, True, '"pentavalent 5-transitive graph", "Aut(PSp(4,4))"',
       CONTAINMENT, stretch=True),
)

ENTRY_INDEX = {e.name: e for e in ENTRIES}


def all_stabilizer_orders() -> set[int]:
    return {o for s in STABILIZER_TYPES for o in orders_for(s)}


@dataclass
class CensusOptions:
    seed: int = DEFAULT_SEED
    stretch: bool = False
    timings: bool = True
    jobs: int = 1
    ir_max_vertices: int = DEFAULT_IR_MAX_VERTICES
    names: Sequence[str] | None = None


@dataclass
class EntryReport:
    name: str
    status: str  # pass | fail | skipped | error
    level: str
    checks: dict = field(default_factory=dict)
    computed: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    error: str = ""

    def record(self, prop: str, expected, computed) -> bool:
        ok = expected == computed
        # a failed check is never overwritten by a later pass
        prior = self.checks.get(prop)
        if prior is not None and not prior["pass"]:
            ok = False
        self.checks[prop] = {"expected": expected, "computed": computed, "pass": ok}
        return ok


@dataclass
class Report:
    entries: list
    seed: int

    @property
    def passed(self) -> bool:
        return all(e.status in ("pass", "skipped") for e in self.entries)

    def summary(self) -> dict:
        counts = {k: sum(1 for e in self.entries if e.status == k)
                  for k in ("pass", "fail", "skipped", "error")}
        return {"total": len(self.entries), **counts, "all_pass": self.passed}

    def to_json(self, timings: bool = True) -> dict:
        out = []
        for e in self.entries:
            d = asdict(e)
            if not timings:
                d.pop("timings")
            out.append(d)
        return {"seed": self.seed, "entries": out, "summary": self.summary()}

    def dumps(self, timings: bool = True) -> str:
        return json.dumps(self.to_json(timings), indent=2, sort_keys=True)

    def table(self, timings: bool = True) -> str:
        head = f"{'entry':<20} {'status':<8} {'n':>5} {'|G|':>8} {'s':>2} {'basic':>6}  failed checks"
        lines = [head, "-" * len(head)]
        for e in self.entries:
            c = e.computed
            basic = c.get("basic")
            failed = [k for k, v in e.checks.items() if not v["pass"]]
            tail = ", ".join(failed) or e.error
            if timings and e.timings:
                tail = f"{tail}  ({sum(e.timings.values()):.2f}s)".strip()
            lines.append(f"{e.name:<20} {e.status:<8} {c.get('order', ''):>5} "
                         f"{c.get('group_order', ''):>8} {c.get('s', ''):>2} "
                         f"{'' if basic is None else ('yes' if basic else 'no'):>6}  {tail}")
        s = self.summary()
        lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['error']} errors, "
                     f"{s['skipped']} skipped")
        return "\n".join(lines)


def _timed(report: EntryReport, key: str, fn):
    t = time.perf_counter()
    out = fn()
    report.timings[key] = round(time.perf_counter() - t, 4)
    return out


def verify_entry(entry: CensusEntry, options: CensusOptions | None = None) -> EntryReport:
    """Construct one graph and compare every measured property with the entry."""
    options = options or CensusOptions()
    rep = EntryReport(entry.name, "pass", entry.verification_level)
    if entry.stretch and not options.stretch:
        rep.status = "skipped"
        rep.error = "stretch entry (flag off)"
        return rep
    try:
        graph = _timed(rep, "construct", lambda: named(entry.recipe(), stretch=options.stretch,
                                                       seed=options.seed))
        c = rep.computed
        c["order"] = graph.n
        c["valency"] = graph.valency
        c["connected"] = graph.is_connected()
        rep.record("order", entry.expected_order, graph.n)
        rep.record("valency", entry.expected_valency, graph.valency)
        rep.record("connected", True, c["connected"])

        if entry.verification_level == FULL_AUT:
            res = _timed(rep, "automorphisms",
                         lambda: automorphism_search(graph, options.ir_max_vertices))
            group = res.group
            c["group_order"] = group.order()
            rep.record("aut_order", entry.expected_aut_order, c["group_order"])
            rep.record("aut_order_by_orbits", c["group_order"], res.order)
            if graph.group is not None:
                rep.record("construction_group_in_aut", True,
                           all(group.contains(x) for x in graph.group.generators))
        else:
            group = graph.group
            if group is None:
                raise PreconditionError("containment entries need a construction group")
            c["group_order"] = group.order()
            rep.record("group_order", entry.expected_aut_order, c["group_order"])
        rep.record("automorphisms_verified", True, verify_automorphisms(graph, group))
        rep.record("arc_transitive", True, _timed(rep, "arc", lambda: is_arc_transitive(graph, group)))

        c["s"] = _timed(rep, "s", lambda: s_transitivity_degree(graph, group))
        rep.record("s", entry.expected_s, c["s"])
        prof = _timed(rep, "profile", lambda: stabilizer_profile(graph, group))
        c["stabilizer"] = prof.to_json()
        rep.record("stabilizer_order", entry.expected_stabilizer_order, int(prof.order))
        rep.record("stabilizer_divides_23040", True, PROP23_BOUND % int(prof.order) == 0)
        rep.record("stabilizer_type_listed", True, bool(prof.matched_types))
        rep.record("stabilizer_listed_for_s", True, int(prof.order) in orders_for(c["s"]) and c["s"] <= 5)

        if entry.verification_level == FULL_AUT and entry.expected_basic is not None:
            b = _timed(rep, "basic", lambda: is_basic(graph, group))
            c["basic"] = b.basic
            if b.witness is not None:
                c["witness_order"] = b.witness.order()
                c["witness_quotient_order"] = b.quotient.quotient.n
            rep.record("basic", entry.expected_basic, b.basic)
        elif entry.expected_basic is not None:
            c["basic"] = None
            c["basic_note"] = "not decided: containment only"
    except UnimplementedGraphError as exc:
        rep.status = "skipped"
        rep.error = str(exc)
        return rep
    except Exception as exc:  # an entry failure must not abort the census
        rep.status = "error"
        rep.error = f"{type(exc).__name__}: {exc}"
        return rep
    if not all(v["pass"] for v in rep.checks.values()):
        rep.status = "fail"
    return rep


def select_entries(names: Sequence[str] | None = None,
                   entries: Sequence[CensusEntry] = ENTRIES) -> list[CensusEntry]:
    if not names:
        return list(entries)
    index = {e.name: e for e in entries}
    missing = [n for n in names if n not in index]
    if missing:
        raise KeyError(f"unknown census entries: {', '.join(missing)}")
    return [index[n] for n in names]


def _verify_packed(args):
    return verify_entry(*args)


def run_census(entries: Sequence[CensusEntry] | None = None,
               options: CensusOptions | None = None) -> Report:
    """Verify every entry and collect the results in entry order."""
    options = options or CensusOptions()
    chosen = select_entries(options.names, entries if entries is not None else ENTRIES)
    if options.jobs > 1 and len(chosen) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            reports = list(pool.map(_verify_packed, [(e, options) for e in chosen]))
    else:
        reports = [verify_entry(e, options) for e in chosen]
    if not options.timings:
        for r in reports:
            r.timings = {}
    return Report(reports, options.seed)


__all__ = [
    "BasicnessResult", "is_basic", "QuotientNode", "normal_quotient_tree", "prop23_details",
    "check_prop23", "check_prop25", "CensusEntry", "ENTRIES", "ENTRY_INDEX", "CensusOptions",
    "EntryReport", "Report", "verify_entry", "run_census", "select_entries",
    "all_stabilizer_orders", "FULL_AUT", "CONTAINMENT",
]
