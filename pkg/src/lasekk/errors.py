"""Exception types raised by the numerical routines."""


class LaseKKError(Exception):
    """Base class for numerical failures (CLI exit code 3)."""


class NonConvergence(LaseKKError):
    """An iterative or time-stepping routine did not settle."""


class PoleOnRealAxis(LaseKKError):
    """The probe response denominator vanishes on the real detuning axis."""


class SingularSystem(LaseKKError):
    """The harmonic-balance linear system is numerically singular."""


class BadTailFit(LaseKKError):
    """The asymptotic tail model does not describe the window edges."""


class EdgeEvaluation(ValueError):
    """A Hilbert transform was requested outside the trusted central window."""
