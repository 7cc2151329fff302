"""Exception types shared across the package."""


class RandProxError(ValueError):
    """Base error carrying a machine-readable ``code``.

    Codes used in the package: NONPOSITIVE_RHO, SHAPE_MISMATCH,
    INDEX_OUT_OF_RANGE, INVALID_DISTRIBUTION, INVALID_Q, NOT_AN_EDGE,
    NONSMOOTH_AT_POINT, EMPTY_GRAPH, UNSUPPORTED_MIX, INVALID_GRAPH,
    INVALID_COVER.
    """

    def __init__(self, code, message=""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)


class ConfigError(RandProxError):
    """Invalid experiment configuration; ``path`` locates the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__("CONFIG_INVALID", f"{path}: {message}" if path else message)


class NumericalError(RandProxError):
    """A run produced non-finite iterates."""

    def __init__(self, message):
        super().__init__("NUMERICAL_FAILURE", message)
