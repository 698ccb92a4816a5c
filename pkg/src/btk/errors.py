"""Exception hierarchy shared across the toolkit."""


class BtkError(Exception):
    """Base class for all toolkit errors."""


class InputError(BtkError):
    """Malformed or out-of-contract input data."""


class PoleOnCircleError(InputError):
    """A rational function has a pole too close to the unit circle."""


class CertificationError(BtkError):
    """A factorization or identity failed its mandatory numerical check."""


class InfeasibleError(BtkError):
    """The problem is provably infeasible (necessary condition violated)."""


class NoSolutionByThisMethodError(BtkError):
    """The solver's hypotheses fail; no conclusion about existence is drawn."""


class ConvergenceError(BtkError):
    """An iterative evaluation did not converge within its term budget."""
