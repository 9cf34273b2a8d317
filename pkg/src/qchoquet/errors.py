"""Exception hierarchy shared by all modules."""


class QChoquetError(Exception):
    """Base class for every domain error raised by the package."""


class NotHermitian(QChoquetError, ValueError):
    pass


class DimensionMismatch(QChoquetError, ValueError):
    pass


class NonConvergence(QChoquetError, ArithmeticError):
    pass


class NotADensityMatrix(QChoquetError, ValueError):
    pass


class InvalidCoefficient(QChoquetError, ValueError):
    pass


class NotComparable(QChoquetError, ValueError):
    pass


class IndistinguishablePoints(QChoquetError, ValueError):
    pass


class IncompleteTable(QChoquetError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SingletonNotInUnitInterval(QChoquetError, ValueError):
    pass


class WeightBelowOne(QChoquetError, ValueError):
    pass


class TopElementViolation(QChoquetError, ValueError):
    pass


class NotMonotone(QChoquetError, ValueError):
    pass


class NotACapacity(QChoquetError, ValueError):
    pass


class NonPositiveValue(QChoquetError, ValueError):
    pass


class DimensionPolicyViolation(QChoquetError, ValueError):
    pass


class NonPSDIncrement(QChoquetError, ValueError):
    pass


class UnsupportedArity(QChoquetError, ValueError):
    pass


class ArityMismatch(QChoquetError, ValueError):
    pass


class ZeroTrace(QChoquetError, ArithmeticError):
    pass


class InvalidSpectrum(QChoquetError, ValueError):
    pass


class NotNormalized(QChoquetError, ValueError):
    pass


class EvenDimension(QChoquetError, ValueError):
    pass


class FormatError(QChoquetError, ValueError):
    """Malformed input file (bad JSON shape, unknown fields, bad literals)."""


class ResultNotCapacityWarning(UserWarning):
    """An inverse Moebius table produced something that is not a capacity."""


class FiducialWarning(UserWarning):
    """Fiducial vector coincides with a position or momentum basis state."""
