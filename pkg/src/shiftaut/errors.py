"""Exception hierarchy shared by every module of the workbench."""


class ShiftautError(Exception):
    """Base class for all errors raised by shiftaut."""


class SpecError(ShiftautError, ValueError):
    """A subshift description is malformed or violates its invariants."""


class NonPrimitiveError(SpecError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class OutOfRangeError(ShiftautError):
    """A length was requested beyond the certified depth of an oracle."""

    def __init__(self, message, depth):
        super().__init__(message)
        self.depth = depth


class NotInLanguageError(ShiftautError):
    def __init__(self, word):
        super().__init__(f"{word!r} is not a certified word of the language")
        self.word = word


class PeriodicShiftError(ShiftautError):
    """A quantity is undefined because the shift is (eventually) periodic."""


class HorizonError(ShiftautError):
    """A search ran off the end of the available data without an answer."""


class RangeError(ShiftautError):
    """A word is too short for a block code, or a composite range is too big."""


class CapExceededError(ShiftautError):
    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


class PreconditionError(ShiftautError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFoundError(ShiftautError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ContractViolation(ShiftautError):
    """A property that the theory guarantees failed on a certified instance."""


class InfeasibleError(ShiftautError):
    """Literal constants of a construction are out of reach at desk scale."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report
