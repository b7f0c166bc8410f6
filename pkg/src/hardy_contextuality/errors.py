"""Exception types raised across the package."""


class ContextualityError(ValueError):
    """Base class for all domain errors raised by this package."""


class DegenerateVector(ContextualityError):
    pass


class ParallelInputs(ContextualityError):
    pass


class IncompatiblePair(ContextualityError):
    """The two projectors are not orthogonal, so they cannot be measured jointly."""


class ProbabilityOutOfRange(ContextualityError):
    pass


class InfeasibleAngles(ContextualityError):
    """No real angle solves the closing relation of the Hardy family recurrence."""


class InvalidScenario(ContextualityError):
    pass


class Infeasible(ContextualityError):
    """A parameter point hits a degenerate normalization."""


class TooLarge(ContextualityError):
    """Exhaustive enumeration over 2**n assignments is not attempted for this n."""


class UnsupportedFormat(ContextualityError):
    pass
