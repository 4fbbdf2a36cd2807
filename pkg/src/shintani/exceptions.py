"""Exception hierarchy shared by all modules."""


class ShintaniError(Exception):
    """Base class for all errors raised by this package."""


class InversionOfZero(ShintaniError, ZeroDivisionError):
    pass


class NonInvertible(ShintaniError):
    """A nonzero element has no inverse: the minimal polynomial is reducible."""


class PrecisionExhausted(ShintaniError):
    """A sign or comparison could not be certified below the precision cap."""


class InvalidFieldSpec(ShintaniError, ValueError):
    pass


class TotallyComplexField(InvalidFieldSpec):
    """Signed cones need a real place to define the half-open faces."""


class UnitsNotIndependent(InvalidFieldSpec):
    pass


class UnitNotTotallyPositive(InvalidFieldSpec):
    pass


class BadSectorCount(InvalidFieldSpec):
    pass


class PointOutsideComplex(ShintaniError, ValueError):
    pass


class AmbiguousBarycentric(ShintaniError):
    """A barycentric coordinate is within tolerance of zero; resample."""


class TwisterSearchFailed(ShintaniError):
    pass


class SingularCone(ShintaniError):
    """Membership was requested for a cone whose generators are dependent."""


class UnstableBound(ShintaniError):
    """Orbit counts changed between the enumeration bound B and B + 2."""


class SchemaError(ShintaniError, ValueError):
    pass
