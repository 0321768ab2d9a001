"""Exception types raised by jordanstrata.

Input errors subclass ValueError so callers may keep catching the builtin;
resource exhaustion subclasses RuntimeError.
"""


class InvalidCartanTypeError(ValueError):
    """Family/rank pair outside the finite crystallographic types."""


class NotFiniteTypeError(ValueError):
    """Node subset does not generate a finite parabolic subgroup."""


class InvalidSubgroupError(ValueError):
    """Isogeny selector does not name a subgroup for this type."""


class MalformedSubsetError(ValueError):
    """Subset given with out-of-range nodes, a bad pattern or an unknown id."""


class VacuousVertexError(ValueError):
    """Vertex lies in the wall set of every member, so no face has it as a vertex."""


class NotAVertexError(ValueError):
    """Node is not a vertex of any face in the stratum's sigma."""


class DimensionMismatchError(ValueError):
    """Line shortcut requested for a flat that is not one-dimensional."""


class UnsupportedCaseError(ValueError):
    """No closed-form classification exists for this type and isogeny."""


class BudgetExceededError(RuntimeError):
    """Enumeration would exceed a configured size budget."""


class TableDataError(ValueError):
    """Bundled table data is missing, malformed or of an unsupported version."""
