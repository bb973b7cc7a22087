"""Exception hierarchy shared across the library."""


class MapcochainsError(Exception):
    """Base class for all library errors."""


class ValidationError(MapcochainsError):
    """Malformed input data: broken invariants, bad files, wrong shapes."""


class HypothesisError(MapcochainsError):
    """A mathematical hypothesis required by an operation is violated,
    e.g. the source dimension exceeds the declared target connectivity."""


class TruncationError(MapcochainsError):
    """A truncated cosimplicial computation cannot certify its own
    completeness at the supplied truncation level."""


class ResourceLimitError(MapcochainsError):
    """A basis or cell enumeration exceeded the configured size cap."""
