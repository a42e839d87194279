"""Exception types shared across the toolkit."""


class CLDError(Exception):
    """Base class for all toolkit errors."""


class DecodeError(CLDError):
    """The input file could not be read or decoded as an image."""


class DimensionError(CLDError):
    """Image has a zero dimension or an otherwise unusable shape."""


class DegenerateImageError(CLDError):
    """Image statistics leave the analysis undefined (all-black mean,
    or a zero saturation range for a constant image)."""


class NoSupportError(CLDError):
    """No direction (or pixel) carries a computable coherence length."""


class DegenerateCurveError(CLDError):
    """Quality product vanished on the whole threshold grid.

    `fallback_tau` carries half the maximum threshold so a caller can
    still proceed deliberately.
    """

    def __init__(self, message: str, fallback_tau: float):
        super().__init__(message)
        self.fallback_tau = fallback_tau


class EmptyTableError(CLDError):
    """A percentage table cannot be built because no pixel is supported."""


class EmptyPartitionError(CLDError):
    """No defective pixel exists at any threshold, so the defect
    percentage range cannot be partitioned."""


class UnreachableCoverageError(CLDError):
    """Requested coverage percentage exceeds what any threshold attains."""

    def __init__(self, message: str, attainable_max: float):
        super().__init__(message)
        self.attainable_max = attainable_max


class UnreachablePercentageError(CLDError):
    """Requested defect percentage exceeds the table maximum."""

    def __init__(self, message: str, alpha_max: int):
        super().__init__(message)
        self.alpha_max = alpha_max
