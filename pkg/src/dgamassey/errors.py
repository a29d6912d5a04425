"""Exception hierarchy shared by every engine."""


class MasseyError(Exception):
    """Base class for all engine errors."""


class MixedPresentation(MasseyError, ValueError):
    pass


class DegreeOutOfRange(MasseyError, ValueError):
    pass


class DegreeMismatch(MasseyError, ValueError):
    pass


class InvalidDifferential(MasseyError, ValueError):
    def __init__(self, message, generator=None):
        super().__init__(message)
        self.generator = generator


class NotABoundary(MasseyError, ValueError):
    """Raised by primitive solving; ``obstruction`` is the residue of the target
    modulo boundaries (a cohomology class when the target is a cocycle)."""

    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class NotACocycle(MasseyError, ValueError):
    pass


class JacobiFailure(MasseyError, ValueError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class NotNilpotent(MasseyError, ValueError):
    pass


class BudgetExceeded(MasseyError, RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class HypothesisFailure(MasseyError, ValueError):
    pass


class ExponentTooLarge(HypothesisFailure):
    pass


class ParseError(MasseyError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
        self.message = message
        self.line = line
        self.column = column


class CorruptCertificate(MasseyError, ValueError):
    pass


class EngineInconsistency(MasseyError, AssertionError):
    """A proven implication failed on computed data; always a bug."""
