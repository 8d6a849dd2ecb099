"""
Exceptions raised by `gaptlz`.

Library functions raise these; batch drivers (CLI, checks) turn them into `Err` rows.
"""


class GaptlzError(Exception):
    """Base class for every error raised on purpose by this package."""


class NonConvergence(GaptlzError):
    """An iterative or series evaluation did not reach the requested tolerance."""


class QuadratureNotConverged(NonConvergence):
    pass


class NotConverged(NonConvergence):
    pass


class PoleError(GaptlzError):
    pass


class JumpPointError(GaptlzError):
    pass


class SingularMinor(GaptlzError):
    """
    A leading principal minor D_k vanished to working precision, so the orthogonal
      polynomial of degree k does not exist for this symbol.
    """

    def __init__(self, k: int, msg: str | None = None):
        self.k = k
        super().__init__(msg or f"Leading minor D_{k} vanishes to working precision")


class SymmetryViolation(GaptlzError):
    pass


class DomainError(GaptlzError, ValueError):
    pass


class OutsideSupport(DomainError):
    pass


class EndpointSingular(DomainError):
    pass


class OutsideGap(DomainError):
    pass


class OutsideDisk(DomainError):
    pass


class BranchAmbiguity(GaptlzError):
    pass


class PathCrossesCut(GaptlzError):
    pass


class OnContour(GaptlzError):
    pass


class ConfigError(GaptlzError):
    pass


class UnknownFlag(ConfigError):
    def __init__(self, flag: str):
        self.flag = flag
        super().__init__(f"Unknown option: {flag}")


class ConfigTypeError(ConfigError, TypeError):
    def __init__(self, key: str, msg: str):
        self.key = key
        super().__init__(f"Invalid value for `{key}`: {msg}")
