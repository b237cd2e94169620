"""Exception types shared by the library and the command-line front end.

Every domain error carries a stable ``code`` string; the CLI prints it on
the error stream and exits with status 1.
"""


class AbelSpcError(Exception):
    code = "E_DOMAIN"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class InvalidInputError(AbelSpcError, ValueError):
    code = "E_INVALID_INPUT"


class InvalidElementError(InvalidInputError):
    code = "E_INVALID_ELEMENT"


class NotPrimeError(InvalidInputError):
    code = "E_NOT_PRIME"


class CapacityError(AbelSpcError):
    code = "E_CAPACITY"


class AmbientMismatchError(AbelSpcError, ValueError):
    code = "E_AMBIENT_MISMATCH"


class PrimeMismatchError(AbelSpcError, ValueError):
    code = "E_PRIME_MISMATCH"


class NotContainedError(AbelSpcError, ValueError):
    code = "E_NOT_SUBGROUP"


class NotPGroupError(AbelSpcError, ValueError):
    code = "E_NOT_PGROUP"


class NotPGroupQuotientError(NotPGroupError):
    code = "E_NOT_PGROUP_QUOTIENT"


class NotProperFamilyError(AbelSpcError, ValueError):
    code = "E_NOT_PROPER_FAMILY"


class NotAFamilyError(AbelSpcError, ValueError):
    code = "E_NOT_A_FAMILY"


class InadmissibleError(AbelSpcError, ValueError):
    code = "E_INADMISSIBLE"


class GuardExceededError(CapacityError):
    code = "E_GUARD_EXCEEDED"
