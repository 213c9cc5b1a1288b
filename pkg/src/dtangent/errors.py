"""Exception types raised across the package."""


class DTangentError(Exception):
    """Base class for all errors raised here."""


class MalformedInput(DTangentError):
    pass


class DuplicateLine(DTangentError):
    pass


class MissingXLine(DTangentError):
    pass


class TooFewLines(DTangentError):
    pass


class NotDivisible(DTangentError):
    pass


class ArrangementMismatch(DTangentError):
    pass


class NotInT(DTangentError):
    pass


class NotInS(DTangentError):
    pass


class DegreeMismatch(DTangentError):
    pass


class RankOverflow(DTangentError):
    pass


class IndexOutOfRange(DTangentError):
    pass


class UnsupportedDegree(DTangentError):
    pass


class UncoveredShape(DTangentError):
    """A tensor shape outside the explicit comparison-map case table."""


class ConditionFails(DTangentError):
    pass


class NotCocycle(DTangentError):
    pass


class RelationFails(DTangentError):
    pass


class NotNormal(DTangentError):
    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)
