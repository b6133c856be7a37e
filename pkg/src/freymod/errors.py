"""Exception hierarchy.

The CLI maps ``GateError`` to exit status 2 and ``DataIntegrityError`` to 3.
"""


class FreymodError(Exception):
    pass


class FieldMismatchError(FreymodError, ValueError):
    """Operands live in different fields."""


class GateError(FreymodError, ValueError):
    """A mathematical hypothesis or precondition does not hold."""


class ExtraUnitsError(GateError):
    """Q(sqrt(-3)) has units other than +-1."""


class TrivialSolutionError(GateError):
    pass


class UnsupportedPlaceError(FreymodError, ValueError):
    pass


class BadReductionError(FreymodError, ArithmeticError):
    pass


class RamifiedCharacterError(FreymodError, ValueError):
    """Character evaluated at a prime dividing its modulus."""


class DataIntegrityError(FreymodError, ValueError):
    pass


class NewformDataError(DataIntegrityError):
    def __init__(self, label, message):
        self.label = label
        super().__init__(f"record {label!r}: {message}")


class CertificateDigestError(DataIntegrityError):
    pass
