"""Exception types shared across the package.

Every error raised on a bad input or an aborted computation derives from
StaticGeoError, so callers can catch one base class at API boundaries
(the command line driver maps them onto exit codes).
"""

from __future__ import annotations

__all__ = [
    "StaticGeoError",
    "UnsupportedKind",
    "TooFewSamples",
    "NonPositiveSample",
    "OutOfDomain",
    "DerivativeOrderUnavailable",
    "InsufficientFiberData",
    "WrongBlockCount",
    "ZeroScale",
    "ZeroK",
    "WrongSign",
    "BadRange",
    "NonPositiveInput",
    "BlowUp",
]


class StaticGeoError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedKind(StaticGeoError, ValueError):
    """An unknown profile kind string was requested."""


class TooFewSamples(StaticGeoError, ValueError):
    """A sampled profile needs at least 9 uniformly spaced samples."""


class NonPositiveSample(StaticGeoError, ValueError):
    """Sampled warping values must be strictly positive."""


class OutOfDomain(StaticGeoError, ValueError):
    """Evaluation requested outside the valid interior of a profile."""


class DerivativeOrderUnavailable(StaticGeoError, ValueError):
    """A derivative order beyond what the profile supports was requested."""


class InsufficientFiberData(StaticGeoError, ValueError):
    """Fiber-level curvature components need a space-form fiber model.

    An abstract Einstein fiber of dimension 3 or more only pins down its
    Ricci tensor, not its full curvature, so Riemann/Weyl level output is
    refused for such blocks.  (Dimension 2 is exempt: an Einstein surface
    has constant curvature.)
    """


class WrongBlockCount(StaticGeoError, ValueError):
    """An operation requires a specific number of fiber blocks."""


class ZeroScale(StaticGeoError, ValueError):
    """A scale factor that must be nonzero was zero."""


class ZeroK(StaticGeoError, ValueError):
    """A curvature constant that must be nonzero was zero."""


class WrongSign(StaticGeoError, ValueError):
    """A parameter has the wrong sign for the requested construction."""


class BadRange(StaticGeoError, ValueError):
    """A numeric parameter fell outside its admissible range."""


class NonPositiveInput(StaticGeoError, ValueError):
    """A strictly positive parameter was zero or negative."""


class BlowUp(StaticGeoError, RuntimeError):
    """Integration aborted: the solution left the admissible region.

    Carries the last arc-length value at which the state was still valid.
    """

    def __init__(self, message: str, last_valid_s: float):
        super().__init__(message)
        self.last_valid_s = float(last_valid_s)
