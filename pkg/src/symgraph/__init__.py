"""symgraph: permutation groups and the symmetry of pentavalent graphs."""

from .exceptions import (
    BoundExceededError,
    DegreeMismatchError,
    NotAMemberError,
    NotAutomorphismError,
    PreconditionError,
    SearchExhaustedError,
    SymgraphError,
    UnimplementedGraphError,
)
from .perm import (
    FactoredOrder,
    Permutation,
    PermGroup,
    compose,
    core,
    group_order,
    inverse,
    is_normal,
    is_semiregular,
    minimal_normal_subgroups,
    normal_closure,
    orbits,
    stabilizer,
)
from .presentation import Presentation, coset_enumeration
from .cosets import CosetSpace
from .atlas import (
    affine_group_24,
    alternating,
    cyclic,
    dihedral,
    find_double_coset_element,
    find_subgroup,
    presented_group,
    projective_linear,
    psl34_with_duality,
    symmetric,
)
from .graphs import (
    Graph,
    QuotientResult,
    cayley,
    cd_family,
    coset_graph,
    cyclotomic_roots,
    double_cover,
    is_isomorphic,
    quotient,
)
from .library import named
from .symmetry import (
    StabilizerProfile,
    automorphism_group,
    is_arc_transitive,
    s_transitivity_degree,
    stabilizer_profile,
    verify_automorphisms,
)
from .census import (
    CensusEntry,
    check_prop23,
    check_prop25,
    is_basic,
    normal_quotient_tree,
    run_census,
)
from .estimators import NormalQuotient, SymmetryAnalyzer

__version__ = "0.1.0"

__all__ = [
    "BoundExceededError", "DegreeMismatchError", "NotAMemberError", "NotAutomorphismError",
    "PreconditionError", "SearchExhaustedError", "SymgraphError", "UnimplementedGraphError",
    "FactoredOrder", "Permutation", "PermGroup", "compose", "core", "group_order", "inverse",
    "is_normal", "is_semiregular", "minimal_normal_subgroups", "normal_closure", "orbits",
    "stabilizer", "Presentation", "coset_enumeration", "CosetSpace", "affine_group_24",
    "alternating", "cyclic", "dihedral", "find_double_coset_element", "find_subgroup",
    "presented_group", "projective_linear", "psl34_with_duality", "symmetric", "Graph",
    "QuotientResult", "cayley", "cd_family", "coset_graph", "cyclotomic_roots", "double_cover",
    "is_isomorphic", "quotient", "named", "StabilizerProfile", "automorphism_group",
    "is_arc_transitive", "s_transitivity_degree", "stabilizer_profile", "verify_automorphisms",
    "CensusEntry", "check_prop23", "check_prop25", "is_basic", "normal_quotient_tree",
    "run_census", "NormalQuotient", "SymmetryAnalyzer", "__version__",
]
