"""Exception types shared across the toolkit."""


class InvalidArgument(ValueError):
    """An argument violates an operation's precondition."""


class OutOfDomain(ValueError):
    """A point lies outside the disk on which the operation is defined."""


class NoKnownWitness(LookupError):
    """No closed-form extremal function is available for the functional."""
