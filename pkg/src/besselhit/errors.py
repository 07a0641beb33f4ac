"""Exception types shared across the package."""


class BesselHitError(Exception):
    """Base class for all package errors."""


class DomainError(BesselHitError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class InstabilityError(BesselHitError, ArithmeticError):
    """A numerical procedure could not reach a trustworthy result.

    Raised by the Laplace inversion when consecutive Gaver-Stehfest
    orders disagree beyond the accepted spread.
    """
