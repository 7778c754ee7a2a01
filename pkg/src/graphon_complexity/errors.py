"""Exception hierarchy shared across the package."""


class GraphonError(Exception):
    """Base class for all errors raised by graphon_complexity."""


class InvalidArgument(GraphonError, ValueError):
    pass


class DoubleSparsification(InvalidArgument):
    pass


class DegenerateInstance(GraphonError, ValueError):
    """Raised when an instance is too small for the requested quantity."""


class RadiusOutOfRange(GraphonError, ValueError):
    pass


class UnsupportedOracle(GraphonError):
    """No ground-truth computation is available for this spec/dimension."""


class TooLargeForExact(GraphonError):
    pass
