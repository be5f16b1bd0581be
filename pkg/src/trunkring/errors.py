"""Exception hierarchy.

Every error carries a stable ``code`` so the CLI can report it in JSON mode.
"""


class TrunkringError(Exception):
    code = "Error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out


def _jsonable(value):
    if isinstance(value, (str, bool)) or value is None:
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= 2**53 else value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


class InputError(TrunkringError):
    """Bad caller input. The CLI maps these to exit status 2."""


class NotPrime(InputError):
    code = "NotPrime"


class BadExponent(InputError):
    code = "BadExponent"


class ModulusMismatch(InputError):
    code = "ModulusMismatch"


class NotAUnit(InputError):
    code = "NotAUnit"


class PreconditionViolated(InputError):
    code = "PreconditionViolated"


class CapExceeded(InputError):
    code = "CapExceeded"


class OutOfRange(InputError):
    code = "OutOfRange"


class BadArity(InputError):
    code = "BadArity"


class UnsupportedTerm(InputError):
    code = "UnsupportedTerm"


class BudgetExceeded(InputError):
    code = "BudgetExceeded"


class UnboundVariable(InputError):
    code = "UnboundVariable"


class RamifiedCase(InputError):
    code = "RamifiedCase"


class DuplicatePrime(InputError):
    code = "DuplicatePrime"


class LengthMismatch(InputError):
    code = "LengthMismatch"


class FormulaSyntaxError(InputError):
    code = "SyntaxError"

    def __init__(self, message, position=None, line=None, column=None):
        if line is not None:
            message = f"{message} at line {line}, column {column}"
        super().__init__(message, position=position, line=line, column=column)
        self.position = position
        self.line = line
        self.column = column


class SortError(FormulaSyntaxError):
    code = "SortError"


class InternalError(TrunkringError):
    """Broken internal invariant (e.g. oracle disagreement); never expected."""

    code = "InternalError"


class OracleDisagreement(InternalError):
    code = "OracleDisagreement"
