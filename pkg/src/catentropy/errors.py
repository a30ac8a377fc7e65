"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CatEntropyError(Exception):
    exit_code = 1


class InputError(CatEntropyError, ValueError):
    exit_code = 2


class DimensionError(InputError):
    pass


class ParameterError(InputError):
    pass


class UnsupportedError(InputError):
    pass


class GeneratorError(CatEntropyError, ValueError):
    """A generator failed validation in its context."""

    exit_code = 3


class AdmissibilityError(GeneratorError):
    pass


class NotIsometryError(GeneratorError):
    pass


class PreconditionError(CatEntropyError, ValueError):
    exit_code = 4


class NotUnimodularError(PreconditionError):
    def __init__(self, det):
        super().__init__(f"matrix is not unimodular (det = {det})")
        self.det = det


class NotGeometricError(PreconditionError):
    pass


class OrientationError(PreconditionError):
    pass


class TheoremViolation(CatEntropyError, AssertionError):
    """Raised when a computation contradicts a proven statement; always a bug."""

    exit_code = 5
