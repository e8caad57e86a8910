"""Exception hierarchy shared by the library, the CLI and the HTTP service."""


class PseudoschedError(Exception):
    """Base class for every error raised by pseudosched."""


class GraphError(PseudoschedError):
    """Malformed graph or tree input, bad root, or a disconnected graph."""


class ColoringError(PseudoschedError):
    """Partial or mis-sized coloring handed to a verifier."""


class GeneratorError(PseudoschedError):
    """Generator parameters that cannot be satisfied."""


class SizeLimitError(PseudoschedError):
    """Exhaustive oracle asked to work on a graph that is too large."""


class PaletteExhaustedError(PseudoschedError):
    """No palette color below the configured cap is free."""

    def __init__(self, vertex, cap):
        super().__init__(f"palette of vertex {vertex} exhausted within i_max={cap}")
        self.vertex = vertex
        self.cap = cap


class VerificationError(PseudoschedError):
    """An algorithm output failed its own verifier."""


class TerminationFailure(PseudoschedError):
    """A d-band run did not see AcquireColor return on every vertex."""

    def __init__(self, message, uncolored=()):
        super().__init__(message)
        self.uncolored = tuple(uncolored)


class BudgetExhaustedError(TerminationFailure):
    """The message budget ran out before the run terminated."""


class DeadlockError(TerminationFailure):
    """No message is in flight but some vertex is still uncolored."""


class ParameterError(PseudoschedError):
    """Out-of-range algorithm parameter such as a band count d < 1."""
