class PoseError(Exception):
    """Base class for solver errors."""


class DegenerateVectorError(PoseError, ValueError):
    pass


class EmptyInputError(PoseError, ValueError):
    pass


class AllPairsRemovedError(PoseError):
    """Every pair failed the pairwise test at the given rotation."""


class NoCandidatesError(PoseError):
    """Every translation candidate was rejected (cheirality or rank)."""


class BudgetExceededError(PoseError):
    pass


class ConfigError(PoseError, ValueError):
    pass
