"""Error types with stable codes surfaced by the CLI."""


class ClmError(Exception):
    code = "CLM_ERROR"

    def __str__(self) -> str:
        msg = super().__str__()
        return f"[{self.code}] {msg}" if msg else f"[{self.code}]"


class ParseError(ClmError):
    code = "PARSE_ERROR"


class CapExceeded(ClmError):
    code = "CAP_EXCEEDED"


class NotAGroup(ClmError):
    code = "NOT_A_GROUP"


class NotASubgroup(ClmError):
    code = "NOT_A_SUBGROUP"


class NotNormal(ClmError):
    code = "NOT_NORMAL"


class UnsupportedComponent(ClmError):
    code = "UNSUPPORTED_COMPONENT"


class NotHomogeneous(ClmError):
    code = "NOT_HOMOGENEOUS"


class TooLarge(ClmError):
    code = "TOO_LARGE"


class BadPrime(ClmError):
    code = "BAD_PRIME"


class NonIntegralPower(ClmError):
    code = "NON_INTEGRAL_POWER"


class SingularSystem(ClmError):
    code = "SINGULAR_SYSTEM"


class InvariantViolated(ClmError):
    code = "INVARIANT_VIOLATED"


class NotFound(ClmError):
    code = "NOT_FOUND"


class NotUnique(ClmError):
    code = "NOT_UNIQUE"


class FormatError(ClmError):
    code = "FORMAT_ERROR"
