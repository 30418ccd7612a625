"""Exception types shared across the package."""


class KatolabError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(KatolabError):
    pass


class NotHermitian(KatolabError):
    pass


class NotPsd(KatolabError):
    pass


class NotUnitary(KatolabError):
    pass


class NotNormal(KatolabError):
    pass


class NotDoubleCommuting(KatolabError):
    pass


class NotOrdered(KatolabError):
    pass


class Singular(KatolabError):
    pass


class ZeroVector(KatolabError):
    pass


class NoConvergence(KatolabError):
    pass


class OutOfDisk(KatolabError):
    pass


class PreconditionFailed(KatolabError):
    pass


class NegativeTrace(KatolabError):
    pass


class DegenerateDraw(KatolabError):
    pass


class NotApplicable(KatolabError):
    pass


class UnknownChecker(KatolabError):
    pass


class ConfigInvalid(KatolabError):
    pass
