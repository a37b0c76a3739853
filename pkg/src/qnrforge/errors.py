"""Exception hierarchy shared by every qnrforge module."""


class QnrError(ValueError):
    """Base class for all qnrforge errors."""


class InvalidModulus(QnrError):
    pass


class NotInvertible(QnrError):
    pass


class InvalidConductor(QnrError):
    pass


class NoSuchSubgroup(QnrError):
    pass


class NonIntegerCoefficients(QnrError):
    pass


class NonIntegerResult(QnrError):
    pass


class DeskScaleExceeded(QnrError):
    pass


class NoShortcut(QnrError):
    pass


class DegeneratePair(QnrError):
    pass


class ReduciblePolynomial(QnrError):
    pass


class SingularTraceMatrix(QnrError):
    pass


class NoParametersFound(QnrError):
    pass


class FallbackExhausted(QnrError):
    """Raised when no candidate conductor produced a verified nonresidue.

    The ``transcript`` attribute holds the per-candidate rejection record.
    """

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript if transcript is not None else {}


class NotAResidue(QnrError):
    pass


class ZeroDenominator(QnrError):
    pass


class ConstructionFailed(QnrError):
    pass


class SingularTransform(QnrError):
    pass


class DegreeDrop(QnrError):
    pass
