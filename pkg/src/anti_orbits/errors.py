"""Exception hierarchy.

Usage errors (bad graphs, malformed codes, violated model invariants) and
certification failures (the numerics could not certify an orbit) are kept
apart so the CLI and the service layer can map them to different outcomes.
"""


class AntiOrbitsError(Exception):
    """Base class for every error raised by this package."""


class GraphError(AntiOrbitsError):
    pass


class CodeFormatError(AntiOrbitsError):
    pass


class WordCountOverflow(AntiOrbitsError):
    def __init__(self, message: str = "word count overflow") -> None:
        super().__init__(f"{message} (use the spectral-radius entropy instead)")


class ModelInvariantError(AntiOrbitsError, ValueError):
    def __init__(self, invariant: str, message: str) -> None:
        super().__init__(message)
        self.invariant = invariant


class CertificationError(AntiOrbitsError):
    category = "certification failure"


class CriticalPointError(CertificationError):
    category = "critical point failure"


class DegenerateCriticalPoint(CriticalPointError):
    def __init__(self, message: str = "degenerate critical point") -> None:
        super().__init__(message)


class PhiDomainError(CertificationError):
    category = "contraction failure"

    def __init__(self, message: str = "phi outside uniformity ball") -> None:
        super().__init__(message)


class ContractionFailure(CertificationError):
    category = "contraction failure"


class ArcsinDomainError(ContractionFailure):
    def __init__(self, message: str = "left arcsin domain") -> None:
        super().__init__(message)


class LeftBallError(CertificationError):
    category = "contraction failure"

    def __init__(self, message: str = "left uniqueness ball") -> None:
        super().__init__(message)


class NotConvergedError(CertificationError):
    category = "convergence failure"


class TwistFailure(CertificationError):
    category = "hyperbolicity failure"

    def __init__(self, index: int) -> None:
        super().__init__(f"twist failure at index {index}")
        self.index = index


class NoStableDirection(CertificationError):
    category = "hyperbolicity failure"

    def __init__(self, message: str = "no stable direction certified") -> None:
        super().__init__(message)


class ThresholdError(CertificationError):
    category = "threshold failure"
