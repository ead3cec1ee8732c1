"""Exception types raised across the package."""


class EntstabError(Exception):
    """Base class for all package errors."""


class NonHermitian(EntstabError, ValueError):
    pass


class NoConvergence(EntstabError, RuntimeError):
    pass


class IndexOutOfRange(EntstabError, IndexError):
    pass


class NotNormalized(EntstabError, ValueError):
    pass


class PositivityViolation(EntstabError, ValueError):
    pass


class DomainError(EntstabError, ValueError):
    pass


class TargetUnreachable(EntstabError, RuntimeError):
    pass


class SizeTooLarge(EntstabError, ValueError):
    pass


class InvalidState(EntstabError, ValueError):
    """Matrix is not a two-qubit density matrix (shape, trace or hermiticity)."""
