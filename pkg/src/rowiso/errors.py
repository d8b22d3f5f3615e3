"""Exception taxonomy shared by every module in the package."""


class RowisoError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RowisoError):
    """Malformed input: bad presentation data, bad words, bad JSON."""


class ContractViolation(RowisoError):
    """A well-formed input violates a mathematical precondition.

    Raised when data that parsed fine turns out to be inconsistent with
    the structures it claims to present, e.g. a generator that is not
    injective on the basis, or a pair of families that do not satisfy
    the declared commutation rule.
    """


class NotCommuting(ContractViolation):
    """An operator handed in as a commutant member fails to commute."""


class ResourceExceeded(RowisoError):
    """A computation hit its configured budget before reaching a verdict.

    Deciders in this package never guess: when a search or chain
    simulation cannot certify an answer within its budget it raises
    this instead of returning a possibly wrong result.
    """
