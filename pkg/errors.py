"""
errors.py - Exception hierarchy for wahlkit

Every error carries the process exit code the CLI uses for it:
1 for data errors (bad input, a query with a negative answer),
3 for internal errors (a proven identity failed, which is always a bug).
"""

from __future__ import annotations


class WahlKitError(Exception):
    """Base class. Data errors exit with 1."""

    exit_code = 1


# ============================================================================
# Data errors
# ============================================================================

class InvalidChain(WahlKitError):
    pass


class NotCoprime(WahlKitError):
    pass


class OutOfRange(WahlKitError):
    pass


class NotContractible(WahlKitError):
    pass


class Sentinel(WahlKitError):
    """Raised when the smooth-point sentinel (1,0) is used where a real singularity is needed."""


class ExcludedChain(WahlKitError):
    pass


class InvalidMarking(WahlKitError):
    pass


class NoSlide(WahlKitError):
    pass


class NotDegree8(WahlKitError):
    pass


class BoundTooSmall(WahlKitError):
    pass


class NotExtremal(WahlKitError):
    pass


class NoBar(WahlKitError):
    pass


class AmbiguousBar(WahlKitError):
    pass


class NotMarkovMutation(WahlKitError):
    pass


class UnknownFamily(WahlKitError):
    pass


class MissingPullback(WahlKitError):
    pass


class NotNef(WahlKitError):
    pass


class AtlasWriteError(WahlKitError):
    pass


# ============================================================================
# Internal errors
# ============================================================================

class InternalError(WahlKitError):
    exit_code = 3


class IdentityViolation(InternalError):
    pass


class VerificationFailed(InternalError):
    pass


class SingularSystem(InternalError):
    pass


def require(condition: bool, message: str, error: type = IdentityViolation) -> None:
    """Raise `error(message)` unless `condition` holds."""
    if not condition:
        raise error(message)
