"""Exception hierarchy shared by all zkdfl components."""


class ZkdflError(Exception):
    """Base class for every error raised by this package."""


class ArgumentError(ZkdflError, ValueError):
    """Malformed or inconsistent arguments (lengths, shapes, off-curve points)."""


class FieldError(ZkdflError, ArithmeticError):
    """Undefined field operation, e.g. inverting zero."""


class OrderingError(ZkdflError):
    """Public input allocated after the first private witness."""


class UnsatisfiedCircuit(ZkdflError):
    """Assignment violates a constraint; ``index`` is the first failing row."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"constraint {index} is not satisfied")


class RangeError(ZkdflError, ValueError):
    """A value falls outside the range a codec or circuit can represent."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class ParseError(ZkdflError, ValueError):
    """Dataset file could not be parsed; carries file and 1-based line number."""

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class RoundAborted(ZkdflError):
    """A verification stage of a protocol round failed.

    ``stage`` names the check (e.g. ``"prove"``, ``"contract_h"``) and
    ``party`` the participant that detected or caused the failure.
    """

    def __init__(self, stage, party, detail):
        self.stage = stage
        self.party = party
        self.detail = detail
        super().__init__(f"round aborted at {stage} ({party}): {detail}")

    def report(self):
        return {"stage": self.stage, "party": self.party, "detail": self.detail}
