"""Exception taxonomy for the reconstruction pipeline.

Every failure either certifies "no generic map exists for this input"
(kind == "invariant", CLI exit code 2) or reports an exhausted budget
(kind == "resource", CLI exit code 3).
"""


class BranchmapError(Exception):
    kind = "invariant"


class DivisionByZero(BranchmapError):
    pass


class DegreeTooLarge(BranchmapError):
    pass


class InexactDivision(BranchmapError):
    pass


class SingularSubstitution(BranchmapError):
    pass


class Inconsistent(BranchmapError):
    pass


class ResourceLimit(BranchmapError):
    kind = "resource"


class NotZeroDimensional(BranchmapError):
    pass


class ShapeFailure(BranchmapError):
    kind = "resource"


class ChartFailure(BranchmapError):
    kind = "resource"


class NotGeneric(BranchmapError):
    pass


class NotPrincipal(BranchmapError):
    pass


class NoAdjoint(BranchmapError):
    pass


class DimensionMismatch(BranchmapError):
    pass


class NotABranchingCurve(BranchmapError):
    def __init__(self, message, dims=None):
        super().__init__(message)
        self.dims = dict(dims or {})


class SingularPoint(BranchmapError):
    pass


class PointSearchExhausted(BranchmapError):
    kind = "resource"


class DegenerateConfiguration(BranchmapError):
    pass


class InterpolationDefect(BranchmapError):
    pass


class NotNineCuspidalSextic(BranchmapError):
    pass


class DualNotSmoothCubic(BranchmapError):
    pass


class NoRationalRoot(BranchmapError):
    def __init__(self, message, mu_poly=None):
        super().__init__(message)
        self.mu_poly = mu_poly


class WrongDegree(BranchmapError):
    pass


class WrongSingularityCount(BranchmapError):
    pass


class VerificationFailed(BranchmapError):
    pass
