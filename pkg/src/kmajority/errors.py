"""Exception types shared across the package."""


class QuerySizeError(ValueError):
    """A query did not have exactly k distinct in-range elements."""


class QueryModeError(RuntimeError):
    """The oracle does not answer this kind of query."""


class InfeasibleInstanceError(ValueError):
    """Too few items to choose the disjoint sets a subroutine needs."""


class InvalidStateError(RuntimeError):
    """A subroutine was entered without its preconditions holding."""


class StrategyError(AssertionError):
    """An adversary invariant broke. Never expected to fire."""


class RunawayError(RuntimeError):
    """An algorithm under duel exceeded the query safety cap."""


class CapacityError(ValueError):
    """An exhaustive search was asked to enumerate too large a space."""
