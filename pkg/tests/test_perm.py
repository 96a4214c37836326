import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import CayleyTable, closure_elements
from symgraph import (
    DegreeMismatchError,
    FactoredOrder,
    NotAMemberError,
    Permutation,
    PermGroup,
    alternating,
    compose,
    core,
    cyclic,
    dihedral,
    is_normal,
    is_semiregular,
    minimal_normal_subgroups,
    normal_closure,
    stabilizer,
    symmetric,
)
from symgraph.atlas import frobenius_f20
from symgraph.perm import (
    centralizer_of_element,
    conjugacy_classes,
    derived_subgroup,
    direct_product,
    element_orders,
    elements_of_order,
    is_semiregular_by_elements,
    pointwise_stabilizer,
)


def perms(degree):
    return st.permutations(list(range(degree))).map(Permutation)


def random_group(rng, max_degree=8, max_gens=3):
    degree = int(rng.integers(2, max_degree + 1))
    k = int(rng.integers(1, max_gens + 1))
    gens = []
    for _ in range(k):
        p = rng.permutation(degree)
        if rng.random() < 0.5:
            # sparse generators give small groups often
            q = np.arange(degree)
            i, j = rng.choice(degree, 2, replace=False)
            q[[i, j]] = q[[j, i]]
            p = q if rng.random() < 0.5 else p
        gens.append(Permutation(p))
    return PermGroup(gens)


# permutations

def test_compose_applies_left_first():
    p = Permutation.from_cycles("(0 1)", 3)
    q = Permutation.from_cycles("(1 2)", 3)
    assert compose(p, q) == p * q
    assert (p * q)(0) == q(p(0)) == 2
    assert (p * q).cycle_string() == "(0 2 1)"


def test_cycle_parsing_and_formatting():
    p = Permutation.from_cycles("(0 3)(1 2 4)", 6)
    assert p.images == (3, 2, 4, 0, 1, 5)
    assert p.order() == 6
    assert p.cycle_string() == "(0 3)(1 2 4)"
    assert Permutation.identity(4).cycle_string() == "()"
    assert p.fixed_points() == [5]


def test_bad_permutations_rejected():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(DegreeMismatchError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_json_roundtrip():
    p = Permutation([2, 0, 1, 3])
    assert Permutation.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        Permutation.from_json({"degree": 3, "images": [0, 1]})


@given(perms(7), perms(7), perms(7))
def test_group_axioms(a, b, c):
    e = Permutation.identity(7)
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * a.inverse() == e
    assert a.power(a.order()) == e
    assert a.power(-1) == a.inverse()
    assert a.conjugate(b) == b.inverse() * a * b


def test_factored_order():
    f = FactoredOrder.of(1320)
    assert int(f) == 1320 and f.primes == [2, 3, 5, 11]
    assert str(f) == "2^3·3·5·11"
    assert str(FactoredOrder.of(1)) == "1"


# stabilizer chains

def test_symmetric_and_alternating_orders():
    for n in range(1, 9):
        assert symmetric(n).order() == np.prod(range(1, n + 1))
    assert alternating(6).order() == 360
    assert dihedral(7).order() == 14
    assert cyclic(9).order() == 9


@pytest.mark.criterion6
@pytest.mark.parametrize("seed", range(25))
def test_bsgs_matches_closure(seed):
    rng = np.random.default_rng(seed)
    g = random_group(rng, max_degree=7)
    if g.order() > 10**4:
        pytest.skip("too large for explicit closure")
    elems = closure_elements([x.array for x in g.generators])
    assert g.order() == len(elems)
    listed = g.element_array().astype(np.int64)
    assert len({r.tobytes() for r in listed}) == len(elems)
    assert {r.tobytes() for r in listed} == {r.tobytes() for r in elems}
    members = {r.tobytes() for r in elems}
    for _ in range(20):
        p = Permutation(rng.permutation(g.degree))
        assert g.contains(p) == (p.array.astype(np.int64).tobytes() in members)


@pytest.mark.criterion6
def test_orbit_stabilizer_on_random_groups():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 100:
        g = random_group(rng)
        elems = g.element_array()
        for p in range(g.degree):
            orbit = set(g.orbit(p))
            assert orbit == set(elems[:, p].tolist())
            fixing = int((elems[:, p] == p).sum())
            assert stabilizer(g, p).order() == fixing
            assert len(orbit) * fixing == g.order()
        checked += 1


def test_pointwise_stabilizer():
    g = symmetric(6)
    assert pointwise_stabilizer(g, [0, 1, 2]).order() == 6
    assert pointwise_stabilizer(g, [5, 0]).order() == 24


def test_large_degree_chain():
    # PGL(2,61) on 62 points and its action on a few thousand cosets are
    # covered in the graph tests; here a direct product of big symmetric groups
    g = direct_product(symmetric(9), alternating(8))
    assert g.order() == 362880 * 20160


def test_membership_errors():
    g = symmetric(4)
    with pytest.raises(DegreeMismatchError):
        g.contains(Permutation.identity(5))
    with pytest.raises(NotAMemberError):
        normal_closure(alternating(4), Permutation.from_cycles("(0 1)", 4))


# normality and structure

def test_normal_closure_and_derived():
    s6 = symmetric(6)
    assert normal_closure(s6, Permutation.from_cycles("(0 1 2)", 6)).order() == 360
    assert derived_subgroup(s6).order() == 360
    assert derived_subgroup(symmetric(4)).order() == 12
    assert derived_subgroup(cyclic(5)).order() == 1
    assert is_normal(s6, alternating(6))
    s5 = PermGroup([Permutation.from_cycles("(0 1)", 6), Permutation.from_cycles("(0 1 2 3 4)", 6)])
    assert not is_normal(s6, s5)


def test_core():
    s6 = symmetric(6)
    s5 = stabilizer(s6, 5)
    assert core(s6, s5).order() == 1
    assert core(s6, alternating(6)).order() == 360
    d4 = PermGroup([Permutation.from_cycles("(0 1 2 3)", 4), Permutation.from_cycles("(0 2)", 4)])
    assert core(symmetric(4), d4).order() == 4


def test_conjugacy_classes_partition_the_group():
    for g in (symmetric(5), alternating(5), dihedral(6), frobenius_f20()):
        classes = conjugacy_classes(g)
        assert sum(len(c) for c in classes) == g.order()
        assert all(g.order() % len(c) == 0 for c in classes)
        table = CayleyTable(g.element_array())
        assert sorted(len(c) for c in classes) == sorted(len(c) for c in table.classes())


def test_element_orders_histogram():
    orders = element_orders(alternating(5).element_array())
    hist = dict(zip(*np.unique(orders, return_counts=True)))
    assert hist == {1: 1, 2: 15, 3: 20, 5: 24}


def test_elements_of_order():
    found = elements_of_order(symmetric(5), 5, limit=3)
    assert len(found) == 3 and all(x.order() == 5 for x in found)


@pytest.mark.parametrize("cycles,expected", [("(0 1)(2 3)", 8), ("(0 1 2)", 9), ("(0 1 2 3 4)", 5)])
def test_centralizer_by_enumeration_and_backtrack(cycles, expected):
    a6 = alternating(6)
    x = Permutation.from_cycles(cycles, 6)
    by_enum = centralizer_of_element(a6, x, bound=10**6)
    by_search = centralizer_of_element(a6, x, bound=1)
    assert by_enum.order() == by_search.order() == expected
    assert all((y * x) == (x * y) for y in by_search.generators)


def test_semiregularity_two_ways():
    z = cyclic(6)
    assert is_semiregular(z) and is_semiregular_by_elements(z)
    s3 = symmetric(3)
    assert not is_semiregular(s3) and not is_semiregular_by_elements(s3)
    # <(0 1)(2 3)> on 4 points is semiregular but intransitive
    g = PermGroup([Permutation.from_cycles("(0 1)(2 3)", 4)])
    assert is_semiregular(g) and is_semiregular_by_elements(g)


SMALL_GROUPS = {
    "S4": lambda: symmetric(4),
    "S5": lambda: symmetric(5),
    "A5xZ2": lambda: direct_product(alternating(5), cyclic(2)),
    "D12": lambda: dihedral(12),
    "F20": frobenius_f20,
    "Z2^4": lambda: direct_product(direct_product(cyclic(2), cyclic(2)),
                                   direct_product(cyclic(2), cyclic(2))),
    "S4xS3": lambda: direct_product(symmetric(4), symmetric(3)),
    "A4xZ3": lambda: direct_product(alternating(4), cyclic(3)),
}


@pytest.mark.criterion6
@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_minimal_normal_subgroups_match_oracle(name):
    g = SMALL_GROUPS[name]()
    assert g.order() <= 2000
    table = CayleyTable(g.element_array())
    expected = sorted(int(m.sum()) for m in table.minimal_normal_subgroups())
    got = minimal_normal_subgroups(g)
    assert not got.sampled
    assert sorted(n.order() for n in got) == expected
    for n in got:
        assert is_normal(g, n)


def test_minimal_normal_sampling_flag():
    g = symmetric(7)
    got = minimal_normal_subgroups(g, class_bound=10)
    assert got.sampled
    assert [n.order() for n in got] == [2520]
