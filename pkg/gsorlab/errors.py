import numpy as np


class GsorlabError(Exception):
    """Base class for every error raised by gsorlab."""


class DimensionMismatchError(GsorlabError, ValueError):
    pass


class NotSymmetricError(GsorlabError, ValueError):
    pass


class NotPositiveDefiniteError(GsorlabError, np.linalg.LinAlgError):
    pass


class RankDeficientError(GsorlabError, np.linalg.LinAlgError):
    pass


class DenseThresholdError(GsorlabError):
    """Raised when an oracle operation would densify a matrix above the threshold."""


class ParameterError(GsorlabError, ValueError):
    pass


class ManifestError(GsorlabError):
    """Matrix Market bundle does not match its manifest."""


class ConfigError(GsorlabError):
    pass
