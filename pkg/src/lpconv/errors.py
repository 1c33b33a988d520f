"""Exception types shared across the package."""


class LpconvError(Exception):
    """Base class for all package errors."""


class BudgetError(LpconvError):
    """An input exceeds a configured enumeration budget."""


class AlgebraMismatch(LpconvError):
    """Operands live on different measure algebras or contexts."""


class NotIsometry(LpconvError):
    """An operator failed surjective-isometry validation."""


class P2Unsupported(LpconvError):
    """The requested structure theory breaks down at exponent 2."""


class POutOfRange(LpconvError):
    """The exponent lies outside the supported range."""


class NotGroupLike(LpconvError):
    """Isometry classes of an algebra do not form a finite group."""
