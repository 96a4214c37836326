"""Estimator-style wrappers around the functional core.

``SymmetryAnalyzer().fit(graph)`` computes the automorphism group and the
derived symmetry data; ``NormalQuotient`` is a transformer mapping a graph
to its quotient by a minimal normal subgroup of its automorphism group.
Both follow the scikit-learn conventions (constructor parameters only,
learned attributes with a trailing underscore, ``get_params``).
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .census import is_basic
from .exceptions import PreconditionError
from .graphs import Graph, quotient
from .perm import PermGroup, minimal_normal_subgroups
from .symmetry import (
    DEFAULT_IR_MAX_VERTICES,
    S_MAX,
    automorphism_search,
    is_arc_transitive,
    s_transitivity_degree,
    stabilizer_profile,
    verify_automorphisms,
)


def check_graph(x) -> Graph:
    """Coerce a Graph, a ``{"n", "edges"}`` mapping or a square 0/1 matrix to a Graph."""
    if isinstance(x, Graph):
        return x
    if isinstance(x, dict):
        return Graph.from_json(x)
    if sparse.issparse(x):
        x = x.toarray()
    arr = np.asarray(x)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square adjacency matrix, got shape {arr.shape}")
    if not np.array_equal(arr, arr.T):
        raise ValueError("adjacency matrix is not symmetric")
    if np.any(np.diag(arr)):
        raise ValueError("adjacency matrix has loops")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("adjacency matrix must be 0/1")
    rows, cols = np.nonzero(np.triu(arr))
    return Graph.from_edges(arr.shape[0], zip(rows.tolist(), cols.tolist()))


class SymmetryAnalyzer(BaseEstimator):
    """Automorphism group, s-transitivity, stabilizer profile and basicness of a graph.

    With ``group`` given, that group is verified and analysed instead of
    the full automorphism group (containment mode; basicness then is only
    relative to it).
    """

    def __init__(self, max_vertices: int = DEFAULT_IR_MAX_VERTICES, max_s: int = S_MAX,
                 vertex: int = 0, group: PermGroup | None = None, compute_basic: bool = True):
        self.max_vertices = max_vertices
        self.max_s = max_s
        self.vertex = vertex
        self.group = group
        self.compute_basic = compute_basic

    def fit(self, X, y=None):
        graph = check_graph(X)
        if self.max_s < 1:
            raise ValueError("max_s must be at least 1")
        if not 0 <= self.vertex < max(graph.n, 1):
            raise ValueError(f"vertex {self.vertex} out of range")
        if self.group is None:
            group = automorphism_search(graph, self.max_vertices).group
            self.full_ = True
        else:
            if not verify_automorphisms(graph, self.group):
                raise PreconditionError("the supplied group does not act by automorphisms")
            group = self.group
            self.full_ = False
        self.graph_ = graph
        self.automorphism_group_ = group
        self.order_ = group.order()
        self.arc_transitive_ = graph.edge_count > 0 and is_arc_transitive(graph, group)
        self.s_ = s_transitivity_degree(graph, group, self.max_s) if self.arc_transitive_ else 0
        self.profile_ = stabilizer_profile(graph, group, self.vertex)
        self.basic_ = None
        if self.compute_basic:
            self.basic_ = is_basic(graph, group, full=self.full_).basic
        return self

    def summary(self) -> dict:
        check_is_fitted(self, "automorphism_group_")
        return {"n": self.graph_.n, "group_order": self.order_, "full": self.full_,
                "arc_transitive": self.arc_transitive_, "s": self.s_,
                "stabilizer": self.profile_.to_json(), "basic": self.basic_}


class NormalQuotient(TransformerMixin, BaseEstimator):
    """Quotient by a normal subgroup of ``Aut`` with at least three orbits.

    ``normal_subgroup`` fixes the subgroup; otherwise ``fit`` picks the
    first minimal normal subgroup of the automorphism group (smallest
    order first) with at least three orbits.
    """

    def __init__(self, normal_subgroup: PermGroup | None = None,
                 max_vertices: int = DEFAULT_IR_MAX_VERTICES):
        self.normal_subgroup = normal_subgroup
        self.max_vertices = max_vertices

    def fit(self, X, y=None):
        graph = check_graph(X)
        if self.normal_subgroup is not None:
            n = self.normal_subgroup
        else:
            aut = automorphism_search(graph, self.max_vertices).group
            n = next((m for m in minimal_normal_subgroups(aut) if len(m.orbits()) >= 3), None)
            if n is None:
                raise PreconditionError("the graph is basic: no normal subgroup has 3 or more orbits")
        self.n_vertices_ = graph.n
        self.subgroup_ = n
        return self

    def transform(self, X):
        check_is_fitted(self, "subgroup_")
        graph = check_graph(X)
        if graph.n != self.n_vertices_:
            raise ValueError(f"fitted on {self.n_vertices_} vertices, got {graph.n}")
        res = quotient(graph, self.subgroup_)
        self.result_ = res
        return res.quotient


__all__ = ["check_graph", "SymmetryAnalyzer", "NormalQuotient"]
