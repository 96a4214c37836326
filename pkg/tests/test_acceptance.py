"""One test per acceptance criterion.

Each test records ``(passed, detail)`` in the session-wide ``acceptance``
dict before asserting, and the terminal summary prints one line per
criterion.  Criterion 6 is the tally of the tests marked ``criterion6``
in the other test modules.
"""

import time

import pytest

from symgraph import (
    Graph,
    PermGroup,
    UnimplementedGraphError,
    double_cover,
    is_basic,
    is_isomorphic,
    named,
    quotient,
    s_transitivity_degree,
    stabilizer_profile,
)
from symgraph.atlas import DEFAULT_SEED, presented_group
from symgraph.census import ENTRIES, ENTRY_INDEX, FULL_AUT, CensusOptions, run_census
from symgraph.graphs import complete_graph
from symgraph.library import NAMES, PRESENTATIONS, _build
from symgraph.perm import minimal_normal_subgroups
from symgraph.symmetry import automorphism_search, is_arc_transitive

CONSTRUCTION_BUDGET = 300.0
AUT_BUDGET = 60.0
CONTAINMENT_BUDGET = 600.0


def record(acceptance, key, passed, detail):
    acceptance[key] = (bool(passed), detail)
    print(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")


def test_criterion_1_construction(acceptance):
    expected = {e.name: e.expected_order for e in ENTRIES if not e.stretch}
    assert set(expected) == set(NAMES) and len(NAMES) == 21
    problems = []
    start = time.perf_counter()
    for name in NAMES:
        # bypass the cache so the timing covers the real construction
        g = _build.__wrapped__(name, DEFAULT_SEED)
        if g.n != expected[name] or g.valency != 5 or not g.is_connected():
            problems.append(f"{name}: n={g.n} valency={g.valency} connected={g.is_connected()}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed <= CONSTRUCTION_BUDGET
    record(acceptance, 1, ok, f"21 graphs, exact orders, valency 5, connected; {elapsed:.1f}s "
           f"(budget {CONSTRUCTION_BUDGET:.0f}s)" + (f"; {problems}" if problems else ""))
    assert ok, problems


AUT_EXPECTED = {
    "K6": 720, "K55": 28800, "CD_11": 1320, "CD_31": 310, "CD_41": 410, "I12": 120,
    "K66_minus_matching": 1440, "I12_double": 480, "G36": 1440, "G42": 241920, "G66": 1320,
    "G114": 6840, "Q5": 3840, "FQ4": 1920, "G32": 1920, "G64_1": 7680, "G64_2": 640,
}


def test_criterion_2_automorphisms(acceptance):
    problems = []
    slowest = 0.0
    for name, order in AUT_EXPECTED.items():
        graph = named(name)
        assert graph.n <= 170
        start = time.perf_counter()
        res = automorphism_search(graph)
        got = res.group.order()
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        if got != order or res.order != order or elapsed > AUT_BUDGET:
            problems.append(f"{name}: {got} (orbit product {res.order}) in {elapsed:.1f}s")
    record(acceptance, 2, not problems,
           f"{len(AUT_EXPECTED)} |Aut| values exact; slowest {slowest:.2f}s "
           f"(budget {AUT_BUDGET:.0f}s each)" + (f"; {problems}" if problems else ""))
    assert not problems, problems


S_CONSTRUCTION = {"G66": 1, "G114": 2, "G406": 2, "G574": 2, "G3422": 2, "G3782": 2}
S_FULL = {"G42": 4, "G36": 2, "I12_double": 2, "I12": 1, "K6": 2}


def test_criterion_3_s_transitivity(acceptance):
    measured = {}
    for name in S_CONSTRUCTION:
        graph = named(name)
        measured[name] = s_transitivity_degree(graph, graph.group)
    for name in S_FULL:
        graph = named(name)
        measured[name] = s_transitivity_degree(graph, automorphism_search(graph).group)
    expected = {**S_CONSTRUCTION, **S_FULL}
    wrong = {k: (v, expected[k]) for k, v in measured.items() if v != expected[k]}
    record(acceptance, 3, not wrong, "s: " + ", ".join(f"{k}={v}" for k, v in measured.items())
           + (f"; mismatches (got, expected) {wrong}" if wrong else ""))
    assert not wrong


QUOTIENT_TABLE_FULL = ["K6", "K55", "CD_11", "CD_31", "CD_41", "K66_minus_matching", "I12", "G36",
                "G42", "G66", "G114"]


def test_criterion_4_basicness(acceptance):
    non_basic = {}
    for name in QUOTIENT_TABLE_FULL:
        assert ENTRY_INDEX[name].verification_level == FULL_AUT
        graph = named(name)
        res = is_basic(graph, automorphism_search(graph).group)
        assert not res.relative and not res.sampled
        if not res.basic:
            non_basic[name] = res
    names_ok = set(non_basic) == {"K66_minus_matching", "I12"}
    quotients_ok = names_ok and all(
        r.quotient.quotient.n <= 12 and is_isomorphic(r.quotient.quotient, complete_graph(6))
        for r in non_basic.values())
    ok = names_ok and quotients_ok
    record(acceptance, 4, ok, f"non-basic among {len(QUOTIENT_TABLE_FULL)} graphs from the normal-quotient table: "
           f"{sorted(non_basic)}; witness quotients isomorphic to K6: {quotients_ok}")
    assert ok


def test_criterion_5_quotients_and_covers(acceptance):
    checks = {}
    i12 = named("I12")
    aut = automorphism_search(i12).group
    centre = [n for n in minimal_normal_subgroups(aut) if n.order() == 2]
    checks["I12/Z2 = K6"] = len(centre) == 1 and is_isomorphic(
        quotient(i12, centre[0]).quotient, complete_graph(6))
    checks["double_cover(K6) = K66-6K2"] = is_isomorphic(double_cover(named("K6")),
                                                         named("K66_minus_matching"))
    k66 = Graph.from_edges(12, [(i, 6 + j) for i in range(6) for j in range(6) if i != j])
    checks["K66-6K2 built = K66-6K2 explicit"] = is_isomorphic(named("K66_minus_matching"), k66)
    fq4 = named("FQ4")
    q5_group = presented_group(PRESENTATIONS["Q5"][0])
    checks["Q5/antipodal = FQ4"] = is_isomorphic(
        quotient(named("Q5"), PermGroup([q5_group.word("abcde")])).quotient, fq4)
    g32_group = presented_group(PRESENTATIONS["G32"][0])
    checks["G32/<a^2> = FQ4"] = is_isomorphic(
        quotient(named("G32"), PermGroup([g32_group.word("a^2")])).quotient, fq4)
    ok = all(checks.values())
    record(acceptance, 5, ok, "; ".join(f"{k}: {v}" for k, v in checks.items()))
    assert ok


CONTAINMENT_EXPECTED = {"G406": 24360, "G574": 34440, "G3422": 205320, "G3782": 226920}


def test_criterion_7_large_containment(acceptance):
    start = time.perf_counter()
    problems = []
    for name, order in CONTAINMENT_EXPECTED.items():
        # a fresh build, so the time includes construction and the stabilizer chain
        graph = _build.__wrapped__(name, DEFAULT_SEED)
        g = graph.group
        prof = stabilizer_profile(graph, g)
        got = {
            "order": g.order(),
            "arc_transitive": is_arc_transitive(graph, g),
            "stabilizer": int(prof.order),
            "A5": "A5" in prof.matched_types,
        }
        if got != {"order": order, "arc_transitive": True, "stabilizer": 60, "A5": True}:
            problems.append(f"{name}: {got}")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed <= CONTAINMENT_BUDGET
    record(acceptance, 7, ok, f"G406/G574/G3422/G3782 group orders, arc-transitivity, "
           f"stabilizer 60 consistent with A5; {elapsed:.1f}s (budget {CONTAINMENT_BUDGET:.0f}s)"
           + (f"; {problems}" if problems else ""))
    assert ok, problems


def test_criterion_8_declared_out_of_reach(acceptance):
    report = run_census(options=CensusOptions(timings=False,
                                              names=["G108", "G170", "G406", "G3782"]))
    status = {e.name: e.status for e in report.entries}
    stretch_skipped = status["G108"] == status["G170"] == "skipped" and report.passed
    no_maximality_claim = all(
        "aut_order" not in e.checks and e.computed.get("basic") is None
        for e in report.entries if e.name in ("G406", "G3782"))
    unimplemented = True
    for name in ("G108", "G170"):
        try:
            named(name)
            unimplemented = False
        except UnimplementedGraphError:
            pass
    ok = stretch_skipped and no_maximality_claim and unimplemented
    record(acceptance, 8, ok, f"stretch entries skipped, not failed: {stretch_skipped}; "
           f"containment entries make no maximality or basicness claim: {no_maximality_claim}; "
           "exhaustiveness of the classification is not attempted")
    assert ok


@pytest.mark.slow
def test_full_census_passes():
    report = run_census(options=CensusOptions(timings=False))
    summary = report.summary()
    assert summary["pass"] == 21 and summary["skipped"] == 2 and report.passed, report.table()
