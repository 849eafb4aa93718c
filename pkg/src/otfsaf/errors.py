"""Exception types shared across the package."""


class InvalidOrder(ValueError):
    """Requested QAM order is not supported."""


class DimensionMismatch(ValueError):
    """Symbol matrix shape does not match the grid configuration."""


class InvalidOversample(ValueError):
    """Oversampling factor is below the minimum of 2 samples per subcarrier period."""


class IndexOutOfRange(ValueError):
    """A time/frequency grid index lies outside [0, N) or [0, M)."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a special function."""


class NoSidelobeSamples(ValueError):
    """The delay-Doppler grid has no samples outside the mainlobe region."""


class ZeroPeak(ValueError):
    """The ambiguity surface is zero at the origin, so ratios are undefined."""


class EmptyMask(ValueError):
    """No reference values exceed the masking threshold."""
