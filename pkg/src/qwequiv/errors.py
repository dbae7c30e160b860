"""Exception types raised across the package."""


class QWError(Exception):
    """Base class for all package errors."""


class InvalidInputError(QWError, ValueError):
    """An argument violates a documented precondition."""


class GuardViolationError(QWError, RuntimeError):
    """Amplitude would leave the interior of a padded lattice."""


class IncommensurateRingPhaseError(QWError, ValueError):
    """A quasi-momentum phase does not fit the ring (Phi * L not a multiple of 2 pi)."""


class SizeLimitError(QWError, ValueError):
    """Dense operator requested for a lattice that is too large."""


class NormDriftError(QWError, RuntimeError):
    """State norm drifted beyond the internal threshold."""
