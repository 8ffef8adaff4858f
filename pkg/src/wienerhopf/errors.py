"""Exception hierarchy.

Everything the library raises on purpose derives from :class:`WienerHopfError`;
the CLI maps :class:`NumericalFailure` subclasses to exit status 2.
"""


class WienerHopfError(Exception):
    """Base class for all library errors."""


class NumericalFailure(WienerHopfError):
    """A computation finished but failed its own acceptance check.

    ``diagnostics`` carries whatever was measured before giving up.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ZeroCrossingError(NumericalFailure):
    """|f| came too close to zero for a continuous logarithm."""


class GridTooCoarseError(NumericalFailure):
    """Adjacent samples differ in phase by too much to unwrap reliably."""


class ResidualError(NumericalFailure):
    """A reconstruction residual exceeded its declared tolerance."""


class NotPositiveDefiniteError(NumericalFailure):
    """A function that must be positive definite failed the check."""


class MassError(NumericalFailure):
    """A recovered density does not integrate to one."""
