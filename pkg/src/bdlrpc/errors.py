"""Exception types raised across the package."""

from __future__ import annotations


class BdlrpcError(Exception):
    """Base class for all package errors."""


class NotPrime(BdlrpcError, ValueError):
    pass


class ReducibleModulus(BdlrpcError, ValueError):
    pass


class SearchExhausted(BdlrpcError, RuntimeError):
    pass


class DivisionByZero(BdlrpcError, ZeroDivisionError):
    pass


class FieldMismatch(BdlrpcError, ValueError):
    pass


class LengthMismatch(BdlrpcError, ValueError):
    pass


class DimensionMismatch(BdlrpcError, ValueError):
    pass


class AmbientMismatch(BdlrpcError, ValueError):
    pass


class DegreeOutOfRange(BdlrpcError, ValueError):
    pass


class ZeroScalar(BdlrpcError, ValueError):
    pass


class RankRetryExhausted(BdlrpcError, RuntimeError):
    pass


class InvalidParameters(BdlrpcError, ValueError):
    pass


class TooLarge(BdlrpcError, ValueError):
    pass


class OutOfRange(BdlrpcError, ValueError):
    pass


class OddU(BdlrpcError, ValueError):
    pass


class WrongShape(BdlrpcError, ValueError):
    pass


class ShapeMismatch(BdlrpcError, ValueError):
    pass


class BothZero(BdlrpcError, ValueError):
    pass
