"""Exception hierarchy.

Errors split into two families so callers (the CLI in particular) can tell a
bad request apart from a numerical dead end: :class:`ValidationError` for
inputs that violate a precondition, :class:`NumericalFailure` for problems
that are well posed but cannot be solved at the requested point.
"""


class QGTubeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(QGTubeError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(ValidationError):
    """A numeric argument lies outside the domain of the operation."""


class UnsupportedScopeError(ValidationError):
    """The request is outside what the model supports (e.g. delta > 1 cuts)."""


class NumericalFailure(QGTubeError):
    """The computation is well posed but failed numerically."""


class ConsistencyError(NumericalFailure):
    """Inputs that should agree (residuals, specs) do not."""


class DegenerateSectorError(NumericalFailure):
    """The Laurent polynomial of a sector lost its leading coefficient."""

    def __init__(self, ell, message=None):
        self.ell = ell
        super().__init__(message or f"sector ell={ell} is degenerate (leading coefficient vanishes)")


class GeometryError(NumericalFailure):
    """Internal inconsistency while constructing the cut geometry."""


class BandEdgeError(NumericalFailure):
    """A double root on the unit circle (band edge) blocks the scattering basis."""


class StopBandError(NumericalFailure):
    """No propagating channel exists at this wavenumber."""


class SingularSystemError(NumericalFailure):
    """The boundary system is singular: a candidate trapped state."""

    def __init__(self, k, condition):
        self.k = k
        self.condition = condition
        super().__init__(f"boundary system singular at k={k!r} (condition estimate {condition:.3e})")


class OracleInapplicableError(NumericalFailure):
    """The finite-tube oracle cannot represent propagating responses."""
