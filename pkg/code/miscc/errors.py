from __future__ import division
from __future__ import print_function


class StabilityError(Exception):
    """Base class of every error raised by the analysis pipeline."""


#############################
# polynomial / rational arithmetic
class NoRoots(StabilityError):
    pass


class DivisorZero(StabilityError):
    pass


class AllZeroRow(StabilityError):
    """Routh array hit a row of zeros (roots mirrored about the origin)."""

    def __init__(self, aux_degree):
        super(AllZeroRow, self).__init__(
            "Routh array is indeterminate, auxiliary polynomial of degree {}".format(aux_degree))
        self.aux_degree = aux_degree


#############################
# frequency responses
class PoleOnGrid(StabilityError):
    def __init__(self, f_hz):
        super(PoleOnGrid, self).__init__("Pole on the sampled jw axis at {} Hz".format(f_hz))
        self.f_hz = f_hz


class ValueNearZero(StabilityError):
    pass


class GridMismatch(StabilityError):
    pass


#############################
# break-point identification
class GridTooSparse(StabilityError):
    pass


class UndeterminedBreaks(StabilityError):
    def __init__(self, breaks):
        super(UndeterminedBreaks, self).__init__(
            "{} break point(s) could not be classified".format(len(breaks)))
        self.breaks = breaks


class OverlappingBreaks(UndeterminedBreaks):
    """Breaks closer than one regression window."""


#############################
# encirclements and verdicts
class MarginalCondition(StabilityError):
    def __init__(self, message, f_hz=None):
        super(MarginalCondition, self).__init__(message)
        self.f_hz = f_hz


class TangentCrossing(MarginalCondition):
    pass


class BoundaryCrossing(MarginalCondition):
    pass


class UnresolvedZeroCrossing(StabilityError):
    """Sampled data cannot tell whether the curve starts on the negative real axis."""

    def __init__(self, message, phase_deg):
        super(UnresolvedZeroCrossing, self).__init__(message)
        self.phase_deg = phase_deg


class NonProperRatio(StabilityError):
    pass


class PoleOnAxis(StabilityError):
    pass


class Ambiguous(StabilityError):
    pass


class PreconditionRhpPoles(StabilityError):
    pass


class HiddenModeRisk(StabilityError):
    def __init__(self, roots):
        super(HiddenModeRisk, self).__init__(
            "Denominators share {} root(s) in the closed RHP: {}".format(len(roots), roots))
        self.roots = roots


#############################
# criteria
class OpenLoopRhpPoles(StabilityError):
    pass


class InvalidSpec(StabilityError):
    pass


#############################
# files
class CsvError(StabilityError):
    def __init__(self, message, line):
        super(CsvError, self).__init__("line {}: {}".format(line, message))
        self.line = line


class ParseError(CsvError):
    pass


class NonMonotoneFrequency(CsvError):
    pass


class NonFinite(CsvError):
    pass


class IoError(StabilityError):
    pass


class UsageError(StabilityError):
    pass
