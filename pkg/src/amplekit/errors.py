"""Exception types shared across the package.

The hierarchy is intentionally shallow.  Everything that stems from a bad
argument derives from ValueError so callers who do not care about the fine
distinctions can catch one thing.
"""

from __future__ import annotations


class AmplekitError(Exception):
    """Base class for package-specific failures."""


class MalformedSimplexError(AmplekitError, ValueError):
    """A simplex literal is unusable: duplicate vertices, negative ids, ..."""


class AbsentVertexError(AmplekitError, KeyError):
    """A vertex id was required to be present in a complex but is not."""


class AbsentSimplexError(AmplekitError, KeyError):
    """A simplex was required to be present in a complex but is not."""


class IdCollisionError(AmplekitError, ValueError):
    """Two complexes that must have disjoint vertex ids share some."""


class InvalidQueryError(AmplekitError, ValueError):
    """Arguments are individually fine but jointly meaningless."""


class InvalidSubcomplexError(AmplekitError, ValueError):
    """A purported subcomplex is not contained where it must be."""


class InvalidEmbeddingError(AmplekitError, ValueError):
    """A vertex map that must be an induced embedding is not one."""


class InvalidParametersError(AmplekitError, ValueError):
    """Numeric parameters violate a documented precondition."""


class ResourceLimitError(AmplekitError, RuntimeError):
    """An enumeration guard tripped; pass force=True to override where allowed."""


class NotAmpleEnoughError(AmplekitError, RuntimeError):
    """A witness required by a construction does not exist in the complex.

    Carries the offending pair so callers can extend the complex and retry.
    """

    def __init__(self, message, vertex_set=None, target_link=None):
        super().__init__(message)
        self.vertex_set = vertex_set
        self.target_link = target_link
