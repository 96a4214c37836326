"""Exception hierarchy shared by every symgraph module."""


class SymgraphError(Exception):
    """Base class for all errors raised by symgraph."""


class DegreeMismatchError(SymgraphError, ValueError):
    """Two permutations (or a permutation and a group) act on different point sets."""


class NotAMemberError(SymgraphError, ValueError):
    """An element, or a subgroup generator, is not contained in the ambient group."""


class BoundExceededError(SymgraphError):
    """A configured size bound was exceeded before a computation could finish."""


class SearchExhaustedError(SymgraphError):
    """A randomized or bounded search gave up without finding a witness.

    This does *not* mean a witness does not exist; callers may retry with a
    different seed or a larger budget.
    """

    def __init__(self, message, tried=0):
        super().__init__(message)
        self.tried = tried


class PreconditionError(SymgraphError, ValueError):
    """The input violates a documented precondition of an operation."""


class NotAutomorphismError(PreconditionError):
    """A permutation supplied as a graph automorphism does not preserve adjacency."""


class UnimplementedGraphError(SymgraphError):
    """A named graph exists only behind the stretch feature flag."""
