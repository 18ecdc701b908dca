"""Exception hierarchy shared by all modules."""


class ImkitError(ValueError):
    """Base class for every error raised by imkit."""


class NotHermitian(ImkitError):
    pass


# herm_eig historically reported this name
NonHermitian = NotHermitian


class NotPSD(ImkitError):
    pass


class BadTrace(ImkitError):
    pass


class NoConvergence(ImkitError):
    pass


class DimensionMismatch(ImkitError):
    pass


class WrongDimension(ImkitError):
    pass


class BlochOutOfBall(ImkitError):
    pass


class BadRank(ImkitError):
    pass


class BadAlpha(ImkitError):
    pass


class IncompleteKraus(ImkitError):
    pass


class NotNormalized(ImkitError):
    pass


class NotOrthonormal(ImkitError):
    pass


class NegativeMinorSum(ImkitError):
    pass


class UnknownName(ImkitError):
    """A requested check, figure, family or measure does not exist."""


class UnknownCheckName(UnknownName):
    pass


class FigureViolation(ImkitError):
    """A row of an emitted dataset breaks the inequality it illustrates."""
