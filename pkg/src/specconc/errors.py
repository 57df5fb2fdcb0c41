"""Exception hierarchy shared across the package."""


class SpecConcError(Exception):
    """Base class for all errors raised by specconc."""


class NonConvergence(SpecConcError):
    """An iterative solver exhausted its iteration budget."""


class DimensionMismatch(SpecConcError, ValueError):
    pass


class DomainViolation(SpecConcError, ValueError):
    """A point fell outside the declared domain of a test function."""


class InconsistentMetadata(SpecConcError, ValueError):
    """Declared test-function metadata is contradicted by an audit witness."""


class GridOutsideDomain(SpecConcError, ValueError):
    pass


class DimensionTooLarge(SpecConcError, ValueError):
    pass


class BoundViolation(SpecConcError, ValueError):
    """A sampler produced an entry outside the ensemble's bound."""


class IndexOutOfRange(SpecConcError, IndexError):
    pass


class MissingParam(SpecConcError, KeyError):
    pass


class ZeroDenominator(SpecConcError, ZeroDivisionError):
    pass


class OutOfRange(SpecConcError, ValueError):
    pass


class ConfigError(SpecConcError, ValueError):
    """Invalid experiment configuration; ``key`` names the offending entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
