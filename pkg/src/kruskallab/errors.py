"""Exception hierarchy.

Everything raised on purpose derives from :class:`KruskalLabError`.  The two
:class:`FalsificationEvent` subclasses mark situations that a proved theorem
says cannot happen; the CLI maps them to exit code 1 instead of 2.
"""

from __future__ import annotations


class KruskalLabError(Exception):
    """Base class for all library errors."""

    #: short machine-readable name used in CLI error documents
    code = "error"

    def __init__(self, message: str = "", location=None):
        super().__init__(message or self.code)
        self.location = location

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self), "location": self.location}


def _make(name: str, base=KruskalLabError, doc: str = ""):
    cls = type(name, (base,), {"code": name, "__doc__": doc or name})
    return cls


class FalsificationEvent(KruskalLabError):
    """A proved statement appears to fail. Always a bug or a real counterexample."""

    code = "FalsificationEvent"


class ContradictionDetected(FalsificationEvent):
    code = "ContradictionDetected"


class Stalled(FalsificationEvent):
    """The chain-cover construction ran out of eligible blocks before covering."""

    code = "Stalled"


UnsupportedField = _make("UnsupportedField", doc="Field outside Q and F_p for p in {2,3,5,7}.")
FieldMismatch = _make("FieldMismatch")
ShapeMismatch = _make("ShapeMismatch")
SpanIsFullSpace = _make("SpanIsFullSpace", doc="The vectors span everything; no nonzero annihilator.")

ZeroFactor = _make("ZeroFactor", doc="A product vector was given a zero factor.")
IndexOutOfRange = _make("IndexOutOfRange")
LastMode = _make("LastMode", doc="Cannot drop the only remaining mode.")
TensorTooLarge = _make("TensorTooLarge")

BadDimensionRequest = _make("BadDimensionRequest")
WrongModeCount = _make("WrongModeCount")
PreconditionFailed = _make("PreconditionFailed")

TooManyVectors = _make("TooManyVectors", doc="Subset enumeration is capped at 24 vectors.")
NonzeroTotalSum = _make("NonzeroTotalSum")
NotAPartition = _make("NotAPartition")
ConditionsViolated = _make("ConditionsViolated")

BudgetExceeded = _make("BudgetExceeded")
RationalsNotEnumerable = _make("RationalsNotEnumerable")
WrongRank = _make("WrongRank")
NotIndependent = _make("NotIndependent")
RationalsRequireProductSpan = _make("RationalsRequireProductSpan")
SumsDiffer = _make("SumsDiffer")

ParseError = _make("ParseError")
SchemaError = _make("SchemaError")


class RankExceedsBound(KruskalLabError):
    """The rank search gave up at ``max_r``; ``lower_bound`` is still valid."""

    code = "RankExceedsBound"

    def __init__(self, message: str = "", lower_bound: int = 0, location=None):
        super().__init__(message, location)
        self.lower_bound = lower_bound

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["lower_bound"] = self.lower_bound
        return d
