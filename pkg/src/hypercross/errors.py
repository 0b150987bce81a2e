"""Exception taxonomy shared by all hypercross modules."""


class HypercrossError(Exception):
    """Base class for all package-specific errors."""


class NonPositiveSmoothness(HypercrossError):
    """A smoothness exponent s_j <= 0 was supplied."""


class InvalidFineIndex(HypercrossError):
    """A fine index q_j <= 0 was supplied (q_j = inf is allowed)."""


class EnergyNeedsSmoothness(HypercrossError):
    """The energy target requires min_j s_j > 1."""


class BudgetExceeded(HypercrossError):
    """A configurable node/memory budget was hit before completion."""


class BoxTooSmall(HypercrossError):
    """The brute-force box cannot certify the requested prefix."""


class DivergentArgument(HypercrossError):
    """A series argument outside its convergence region."""


class AlphaTooSmall(HypercrossError):
    """alpha <= 1 where the sup defining A_alpha is infinite."""


class NoSignChange(HypercrossError):
    """Root bracketing failed; signals a numeric bug, not bad input."""


class UnknownTheorem(HypercrossError):
    """Unrecognized theorem identifier."""


class MissingParameter(HypercrossError):
    """A bound evaluator needs a parameter that was not supplied."""
