"""Exception hierarchy.

Two families: ``InputError`` for malformed or out-of-contract input, and
``NumericalError`` for degenerate geometry. The CLI maps them to exit codes
2 and 3 respectively.
"""


class GeometryError(Exception):
    """Base class for every error raised by this package."""


class InputError(GeometryError, ValueError):
    pass


class NumericalError(GeometryError, ArithmeticError):
    pass


class SchemaError(InputError):
    pass


class PreconditionError(InputError):
    pass


class EmptyInput(InputError):
    pass


class PointAtInfinity(NumericalError):
    pass


class SingularMatrix(NumericalError):
    pass


class DegenerateSimilarity(NumericalError):
    pass


class NotASimilarity(NumericalError):
    pass


class DegeneratePointPair(NumericalError):
    pass


class DegenerateKernel(NumericalError):
    pass


class NotAKernel(NumericalError):
    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class NotDecomposable(NumericalError):
    pass


class DegenerateQuad(NumericalError):
    pass


class NumericalFailure(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class NoConsensus(NumericalError):
    pass


class DegenerateAffine(NumericalError):
    pass


class DegenerateAffineKernel(NumericalError):
    pass


class ExhaustedRedraws(NumericalError):
    pass
