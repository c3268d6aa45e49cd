"""Exception hierarchy.  ``exit_code`` is what the CLI returns for each family."""


class MirrorStokesError(Exception):
    exit_code = 1


# parse family (2)
class ParseError(MirrorStokesError, ValueError):
    exit_code = 2

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


# direction family (3)
class InadmissibleDirection(MirrorStokesError):
    exit_code = 3


# tracking family (4)
class TrackingError(MirrorStokesError):
    exit_code = 4


class RootFindingDiverged(TrackingError):
    pass


class SheetCollision(TrackingError):
    pass


class CorrectorDiverged(TrackingError):
    pass


class AmbiguousLimit(TrackingError):
    pass


class DegenerateBasePoint(TrackingError):
    pass


# degeneracy family (5)
class DegenerateInput(MirrorStokesError):
    exit_code = 5


class UnsupportedDegeneracy(DegenerateInput):
    pass


class InconsistentTopology(DegenerateInput):
    pass


class UnsupportedWeights(DegenerateInput):
    pass


# exact / algebraic failures (1)
class SingularSystem(MirrorStokesError, ArithmeticError):
    pass


class ReductionFailure(MirrorStokesError):
    pass


class NoCyclicVector(MirrorStokesError):
    pass


class RankMismatch(MirrorStokesError):
    pass


class NotUnipotent(MirrorStokesError, ValueError):
    pass


class NotFound(MirrorStokesError):
    pass
