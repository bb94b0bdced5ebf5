"""Exception hierarchy."""


class NprError(Exception):
    pass


class ParseError(NprError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ValidationError(NprError):
    """All semantic problems found in a knowledge base, reported together."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class CapExceeded(NprError):
    pass


class UnknownAtom(NprError):
    pass


class NumericFailure(NprError):
    pass


class InconsistentBase(NprError):
    pass


class PriorityCycle(NprError):
    pass


class OverlapError(NprError):
    pass
