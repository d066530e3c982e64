"""Exception hierarchy.

Validation problems (bad parameters, malformed files, contract violations)
derive from :class:`ValidationError`; numerical failures derive from
:class:`NumericError`. The CLI maps the two families onto distinct exit codes.
"""


class GraphSignalError(Exception):
    """Base class for all errors raised by graphsig."""


class ValidationError(GraphSignalError, ValueError):
    """Input failed validation."""


class ParameterError(ValidationError):
    pass


class EmptyGraphError(ValidationError):
    pass


class DegenerateDegreeError(ValidationError):
    """A degree-normalized operator was requested on a graph with an isolated vertex."""


class DisconnectedGraphError(ValidationError):
    pass


class UnsupportedVariantError(ValidationError):
    pass


class LengthMismatchError(ValidationError):
    pass


class KernelDomainError(ValidationError):
    """A kernel was evaluated outside the interval it is defined on."""


class SupportViolationError(ValidationError):
    """Vertex-domain filter coefficients reach beyond the declared hop radius."""


class AdmissibilityError(ValidationError):
    pass


class FileFormatError(ValidationError):
    pass


class NumericError(GraphSignalError, ArithmeticError):
    """A numerical routine failed to converge or produced an inaccurate result."""
