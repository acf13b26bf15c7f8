"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage errors exit 1, data/domain errors
exit 2, and search timeouts / not-found results exit 3.
"""


class RingThermError(Exception):
    """Base class for all package errors."""


class DomainError(RingThermError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class ParityError(DomainError):
    """A wall count or configuration violates the odd-ring parity rule."""


class SaturationError(DomainError):
    """A density target sits in a degenerate regime and cannot be inverted.

    ``regime`` is ``"zero_temperature"`` (at or below the one-wall ground
    state density) or ``"high_t_saturation"`` (at or above 1/2).
    """

    def __init__(self, message, regime):
        super().__init__(message)
        self.regime = regime


class EnumerationLimitError(DomainError):
    """Ring too large for the brute-force enumeration oracle."""


class RingMismatchError(DomainError):
    """Two objects refer to rings of different sizes."""


class ExtrapolationError(DomainError):
    """Annealing time lies outside a profile table and extrapolation is off."""


class NegativeTemperatureError(DomainError):
    """Offset-corrected physical temperature would be negative."""


class DanglingNodeError(DomainError):
    """An edge references a node that is not part of the graph."""


class ParseError(RingThermError):
    """A file does not conform to its documented format."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}:" if line is None else f"{path}:{line}:"
        super().__init__(f"{loc} {message}" if loc else message)
        self.path = path
        self.line = line


class PlanInfeasibleError(RingThermError):
    """A single shot already exceeds the per-submission time budget."""


class InsufficientDataError(RingThermError):
    """Fewer usable points than the fit requires."""


class DegenerateAbscissaError(InsufficientDataError):
    """All abscissa values coincide; the slope is not identifiable."""


class EmptyGroupError(RingThermError):
    """An aggregation group has no qualifying entries."""


class EmbeddingNotFoundError(RingThermError):
    """Cycle search exhausted its budget; existence remains undecided."""


class BipartiteGraphError(RingThermError):
    """The graph is bipartite, so no odd cycle exists (a proof, not a timeout)."""
