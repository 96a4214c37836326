import numpy as np
import pytest
from scipy import sparse
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from symgraph import (
    NormalQuotient,
    PermGroup,
    Permutation,
    PreconditionError,
    SymmetryAnalyzer,
    is_isomorphic,
    named,
)
from symgraph.estimators import check_graph
from symgraph.graphs import complete_graph


def test_params_roundtrip():
    est = SymmetryAnalyzer(max_vertices=100, max_s=3)
    params = est.get_params()
    assert params["max_vertices"] == 100 and params["max_s"] == 3
    copy = clone(est)
    assert copy.get_params() == params and copy is not est
    est.set_params(vertex=2)
    assert est.vertex == 2


def test_analyzer_on_i12():
    est = SymmetryAnalyzer().fit(named("I12"))
    assert est.order_ == 120 and est.full_
    assert est.arc_transitive_ and est.s_ == 1
    assert int(est.profile_.order) == 10
    assert est.basic_ is False
    assert est.summary()["group_order"] == 120


def test_analyzer_accepts_matrices():
    k6 = complete_graph(6)
    dense = k6.adjacency_matrix().toarray()
    a = SymmetryAnalyzer().fit(dense)
    b = SymmetryAnalyzer().fit(sparse.csr_matrix(dense))
    c = SymmetryAnalyzer().fit(k6.to_json())
    assert a.order_ == b.order_ == c.order_ == 720


@pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.array([[0, 1], [0, 0]]),
                                 np.eye(3, dtype=int), np.array([[0, 2], [2, 0]])])
def test_check_graph_rejects(bad):
    with pytest.raises(ValueError):
        check_graph(bad)


def test_analyzer_parameter_validation():
    with pytest.raises(ValueError):
        SymmetryAnalyzer(max_s=0).fit(complete_graph(4))
    with pytest.raises(ValueError):
        SymmetryAnalyzer(vertex=9).fit(complete_graph(4))


def test_analyzer_containment_mode():
    g = named("G114")
    est = SymmetryAnalyzer(group=g.group).fit(g)
    assert not est.full_ and est.order_ == 6840 and est.s_ == 2
    g66 = named("G66")
    shift = PermGroup([Permutation(list(range(1, 66)) + [0])])
    assert not g66.is_automorphism(shift.generators[0])
    with pytest.raises(PreconditionError):
        SymmetryAnalyzer(group=shift).fit(g66)


def test_summary_requires_fit():
    with pytest.raises(NotFittedError):
        SymmetryAnalyzer().summary()


def test_normal_quotient_transformer():
    i12 = named("I12")
    q = NormalQuotient().fit_transform(i12)
    assert is_isomorphic(q, complete_graph(6))
    with pytest.raises(PreconditionError):
        NormalQuotient().fit(named("K6"))


def test_normal_quotient_given_subgroup():
    graph = named("G32")
    a2 = graph.group.word("a^2")
    est = NormalQuotient(normal_subgroup=PermGroup([a2])).fit(graph)
    assert est.transform(graph).n == 16
    with pytest.raises(ValueError):
        est.transform(named("FQ4"))


def test_transform_requires_fit():
    with pytest.raises(NotFittedError):
        NormalQuotient().transform(named("K6"))
