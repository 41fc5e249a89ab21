"""
errors.py - Exception hierarchy for stabrbm

Input problems derive from ValueError, internal or numerical failures from
RuntimeError, so callers may catch either the builtin or StabRbmError.
"""
from typing import Optional


class StabRbmError(Exception):
    """Base class for every error raised by stabrbm."""


class DimensionMismatchError(StabRbmError, ValueError):
    """Operands disagree on qudit count or local dimension."""


class RankUndefinedError(StabRbmError, ValueError):
    """Rank requested over Z_d for composite d."""


class InvalidGroupError(StabRbmError, ValueError):
    """Generators do not commute or are not independent."""


class LatticeSpecError(StabRbmError, ValueError):
    """A lattice description cannot be built."""


class NotComposableError(StabRbmError, ValueError):
    """The group has no analytic construction and needs the variational route."""


class FormatError(StabRbmError, ValueError):
    """Malformed JSON or binary artifact."""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class EnumerationCapError(StabRbmError, ValueError):
    """A dense enumeration would exceed the configured cap."""

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(
            f"enumeration needs {required} amplitudes but the cap is {cap}; "
            "raise STABRBM_CAP (or --cap) or shrink the system"
        )


class SubsystemError(StabRbmError, ValueError):
    """Restricted stabilizers do not close or do not pin a unique state."""

    def __init__(self, message: str, rank: Optional[int] = None):
        self.rank = rank
        super().__init__(message)


class ConsistencyError(StabRbmError, RuntimeError):
    """An internal invariant failed."""


class NonFiniteLossError(StabRbmError, RuntimeError):
    """The distance function overflowed."""


class OptimizationStalledError(StabRbmError, RuntimeError):
    """No restart improved on its initial distance."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)
