"""Exception hierarchy shared by every module."""


class SheafError(Exception):
    """Base class for all errors raised by the package."""


class StructuralError(SheafError):
    """Dangling or unknown identifiers in user-supplied data."""


class SizeLimitExceeded(SheafError):
    pass


class NoTerminal(SheafError):
    pass


class NotTerminal(SheafError):
    pass


class SieveExplosion(SheafError):
    pass


class SubcanonicityViolation(SheafError):
    pass


class ShapeMismatch(SheafError):
    pass


class NotMono(SheafError):
    pass


class NotEpi(SheafError):
    pass


class NotStrongMono(SheafError):
    pass


class UnknownPoint(SheafError):
    pass


class SoundnessError(SheafError):
    """A constructed output failed certification.

    This indicates a bug in the engine, never in the input.
    """


class ParseError(SheafError):
    pass


class SchemaError(SheafError):
    pass


class ValidationError(SheafError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
