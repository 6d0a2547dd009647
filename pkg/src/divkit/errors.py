"""Exception hierarchy shared by every divkit module."""


class DivkitError(Exception):
    """Base class for all divkit errors."""


class DistributionError(DivkitError, ValueError):
    """Invalid input for a probability distribution."""


class NonPositiveWeightError(DistributionError):
    pass


class TooShortError(DistributionError):
    pass


class AllZeroCountsError(DistributionError):
    pass


class NonPositiveAlphaError(DistributionError):
    pass


class UnknownIdError(DivkitError, KeyError):
    """A measure, chain or ratio name that is not in the registry."""

    def __str__(self):  # KeyError quotes its argument; keep the message readable
        return str(self.args[0]) if self.args else ""


class IndexOutOfRangeError(DivkitError, ValueError):
    pass


class NonPositiveXError(DivkitError, ValueError):
    pass


class DimensionMismatchError(DivkitError, ValueError):
    pass


class InvalidPairError(DivkitError, ValueError):
    """A difference D_XY was requested for a pair that is not chain-ordered."""


class DivergenceOverflowError(DivkitError, OverflowError):
    """The exponential divergence exponent exceeded the representable range."""


class ZeroDenominatorError(DivkitError, ZeroDivisionError):
    pass


class OneSidedMismatchError(DivkitError, ArithmeticError):
    """Left and right limits of a ratio at x = 1 disagree."""
