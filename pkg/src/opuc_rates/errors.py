"""Exception hierarchy.

Every numerical failure raised by the library derives from
:class:`NumericalError` so that front ends can map them to one exit code.
"""


class NumericalError(ArithmeticError):
    """Base class for failures of a numerical routine."""


class InvalidParameterError(ValueError):
    """A weight or routine was given parameters outside its domain."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes
    ----------
    index : int or None
        Worst offending moment index (``None`` for scalar integrals).
    achieved : float
        Best error estimate reached before giving up.
    """

    def __init__(self, message, index=None, achieved=float("nan")):
        super().__init__(message)
        self.index = index
        self.achieved = achieved


class NormalizationError(NumericalError):
    """The mass of a weight is not finite and positive."""


class NotPositiveDefiniteError(NumericalError):
    """Levinson recursion produced a Verblunsky coefficient with ``|a_k| >= 1``."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class DegenerateKernelError(NumericalError):
    """A reproducing kernel diagonal came out non-positive."""


class KernelDomainError(NumericalError):
    """Evaluation point too far outside the unit circle for the kernel degree."""


class NegativeEntropyError(NumericalError):
    """Entropy came out clearly negative, which signals a quadrature failure."""

    def __init__(self, message, log_mass, mean_log):
        super().__init__(message)
        self.log_mass = log_mass
        self.mean_log = mean_log


class InsufficientSpanError(ValueError):
    """Not enough radii, or too narrow a range, to fit a scaling exponent."""
