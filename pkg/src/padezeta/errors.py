"""Exception hierarchy shared across the package."""


class PadeZetaError(Exception):
    """Base class for all errors raised by padezeta."""


class InvalidParameters(PadeZetaError, ValueError):
    pass


class DivisionFailure(PadeZetaError):
    """Exact polynomial division left a remainder where none was expected."""


class IntegralityFailure(PadeZetaError):
    """A linear-form coefficient that must be an integer is not."""


class PoleAtPoint(PadeZetaError):
    pass


class PrecisionNotReached(PadeZetaError):
    pass


class DivergentXi1(PadeZetaError):
    pass


class PreconditionViolated(PadeZetaError, ValueError):
    pass


class RankDeficient(PadeZetaError):
    def __init__(self, message, achieved_rank, target_rank):
        super().__init__(message)
        self.achieved_rank = achieved_rank
        self.target_rank = target_rank


class HypothesisViolated(PadeZetaError):
    def __init__(self, message, failures):
        super().__init__(message)
        self.failures = failures
