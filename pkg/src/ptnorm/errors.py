"""Exception hierarchy.

Two families are distinguished because the CLI maps them to different exit
codes: :class:`NumericalError` (a solver or quadrature failed) and
:class:`RegimeError` (the request is outside the validity domain of the
model, e.g. asking for a broken pair below the critical coupling).
"""


class PtNormError(Exception):
    """Base class for all package errors."""


class NumericalError(PtNormError):
    pass


class RegimeError(PtNormError):
    pass


class NoSignChange(NumericalError):
    pass


class MaxIterations(NumericalError):
    pass


class Diverged(NumericalError):
    pass


class LinearSolveFailure(NumericalError):
    pass


class TruncationTooTight(NumericalError):
    pass


class PoorReconstruction(NumericalError):
    pass


class DegeneratePair(NumericalError):
    pass


class OverflowGuard(NumericalError):
    pass


class ZeroPseudoNorm(RegimeError):
    """Self pseudo-overlap vanishes: the state belongs to a broken pair."""


class OutOfOvalRange(RegimeError):
    pass


class NotBroken(RegimeError):
    pass


class ExceptionalCoupling(RegimeError):
    pass


class BranchCut(RegimeError):
    pass
