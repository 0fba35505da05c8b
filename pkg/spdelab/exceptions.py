class ImproperlyConfigured(BaseException):
    pass


class InvalidDimensionError(ValueError):
    """Raised when array lengths, grid sizes or bases don't fit together.

    Covers the dealiasing rule ``G >= ceil(3N/2)`` at basis construction as
    well as coefficient / grid vectors of the wrong length and fields that
    belong to another basis.
    """


class InadmissibleParameterError(ValueError):
    """Raised when exponents or constants violate the admissibility
    conditions of an estimate (Kolmogorov ``eta``, contraction budget
    exponents, moment exponent ``q <= 2(d+2)``)."""


class NoConvergenceError(RuntimeError):
    """Raised by the Picard solver when ``max_iter`` is reached with the
    iterate distance still above ``tol`` – the horizon is too long for the
    map to contract.

    The partial result (iterates' contraction factors) is attached as
    ``result``.
    """

    def __init__(self, message: str, result=None) -> None:
        super().__init__(message)
        self.result = result


class EmptyEnsembleError(ValueError):
    """Raised when an ensemble has no paths."""


class MissingMomentError(KeyError):
    """Raised when a bound check asks for a moment the series doesn't carry."""


CONFIG_ERRORS = (ImproperlyConfigured, InadmissibleParameterError, InvalidDimensionError)
"""Errors that mean the experiment config can't be run (exit code 1)."""
