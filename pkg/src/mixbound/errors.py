"""Exception types shared across the package."""


class MixboundError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(MixboundError, ValueError):
    pass


class NotAbsolutelyContinuous(MixboundError, ValueError):
    """The support of the numerator measure is not contained in the support of the denominator."""


class NotNested(MixboundError, ValueError):
    """Mixture components whose supports are not nested."""


class IntegrationDidNotConverge(MixboundError, ArithmeticError):
    pass


class NonPositiveFunction(MixboundError, ValueError):
    """Entropy functionals need a strictly positive test function."""


class Unsupported(MixboundError, NotImplementedError):
    """No closed form is catalogued for the requested pair."""


class InfiniteChi(MixboundError, ValueError):
    """A chi-squared constant is infinite; use the nested-support corollary instead."""


class NoConvexityBound(MixboundError, ValueError):
    pass


class GridTooCoarse(MixboundError, ArithmeticError):
    pass
