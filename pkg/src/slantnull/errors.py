"""Exception types raised by the library.

The CLI maps each of these onto a fixed exit code, see :mod:`slantnull.cli`.
"""


class SlantNullError(Exception):
    """Base class for all library errors."""


class ConfigError(SlantNullError, ValueError):
    """Invalid model/curve parameters or malformed configuration."""


class DegenerateMetric(SlantNullError, ValueError):
    pass


class TangentVanishes(SlantNullError, ValueError):
    """The curve is not regular at some sample."""


class ZeroSlant(SlantNullError, ValueError):
    """Slant constant a = 0 (Legendre curve); frame formulas divide by a."""


class GeodesicCurve(SlantNullError):
    """k1 vanishes somewhere, so the distinguished frame is not unique."""


class NonFinite(SlantNullError, ArithmeticError):
    pass


class OrientationDomain(SlantNullError, ValueError):
    """Lie example requested with c*a <= 0."""


class DegenerateB(SlantNullError, ValueError):
    """Lie example requested with c = +-1/a**2, where b vanishes."""


class TraceZero(SlantNullError, ValueError):
    pass


class NotProjectiveFamily(SlantNullError, ValueError):
    """Matrix does not satisfy A @ A == trace(A) * A."""


class NotSlantNull(SlantNullError, ValueError):
    """Curve fails the null or the slant condition within tolerance."""
