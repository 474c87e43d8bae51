"""Exception hierarchy for hypergreedy."""


class HyperGreedyError(Exception):
    """Base class for all package errors."""


class InvalidDegreeSequence(HyperGreedyError, ValueError):
    pass


class NegativeFraction(InvalidDegreeSequence):
    pass


class SumNotOne(InvalidDegreeSequence):
    pass


class ZeroTopDegree(InvalidDegreeSequence):
    pass


class UniformityTooSmall(InvalidDegreeSequence):
    pass


class MaxDegreeTooSmall(InvalidDegreeSequence):
    pass


class DomainError(HyperGreedyError, ValueError):
    """Argument outside the interval where a function is defined."""


class ConvergenceFailure(HyperGreedyError, RuntimeError):
    pass


class DegenerateCase(HyperGreedyError, ValueError):
    pass


class SingularState(HyperGreedyError, RuntimeError):
    """ODE integration reached the m = 0 singularity."""


class DivisibilityError(HyperGreedyError, ValueError):
    pass


class ModeMismatch(HyperGreedyError, ValueError):
    pass
