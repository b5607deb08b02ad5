"""Exception hierarchy shared by all shootout modules."""


class ShootoutError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ShootoutError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConsistencyError(ShootoutError, ValueError):
    """A history contradicts the mechanism it is replayed against."""


class ResourceError(ShootoutError):
    """A request exceeds the enforced enumeration ceiling."""


class DegenerateModelError(ShootoutError, ValueError):
    """Sudden death never resolves under the given scoring probabilities."""


class UnsupportedModelError(ShootoutError, ValueError):
    """The operation does not support this kind of scoring model."""


class SingularityError(ShootoutError, ZeroDivisionError):
    """A closed-form expression has a vanishing denominator."""
