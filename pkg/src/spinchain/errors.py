"""Exception types raised across the package.

Everything derives from :class:`SpinChainError` (itself a ``ValueError``) so
callers can catch the whole family at once; the CLI maps it to exit code 1.
"""


class SpinChainError(ValueError):
    pass


class EmptyStringError(SpinChainError):
    pass


class InvalidCharacterError(SpinChainError):
    pass


class NotPowerOfTwoError(SpinChainError):
    pass


class NotNormalizedError(SpinChainError):
    pass


class WrongQubitCountError(SpinChainError):
    pass


class DimensionMismatchError(SpinChainError):
    pass


class TargetOutOfRangeError(SpinChainError):
    pass


class ArityMismatchError(SpinChainError):
    pass


class TooManyQubitsError(SpinChainError):
    pass


class TooManySitesError(SpinChainError):
    pass


class ClosedChainTooSmallError(SpinChainError):
    pass


class OddSitesForDomainWallError(SpinChainError):
    pass


class InvalidSitePairError(SpinChainError):
    pass


class SiteOutOfRangeError(SpinChainError):
    pass


class EmptyCountsError(SpinChainError):
    pass


class BadProbabilityError(SpinChainError):
    pass


class GridMismatchError(SpinChainError):
    pass


class ConfigError(SpinChainError):
    """Invalid experiment configuration; message names the offending field."""
