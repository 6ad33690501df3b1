"""Exception hierarchy shared by all numerical layers."""


class AbSpectralError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AbSpectralError, ValueError):
    """An argument lies outside the domain of the requested function."""


class AccuracyError(AbSpectralError, ArithmeticError):
    """The requested accuracy could not be reached within the policy limits."""


class BracketError(AbSpectralError, ValueError):
    """A root bracket does not enclose a sign change."""


class SearchError(AbSpectralError, RuntimeError):
    """A supremum search could not certify that its window contains the maximum."""


class UnsupportedError(AbSpectralError, NotImplementedError):
    """The parameter combination is valid mathematically but not computable here."""


class RangeError(AbSpectralError, ValueError):
    """A requested energy exceeds the range covered by a computed spectrum."""


class EmptyResult(AbSpectralError, LookupError):
    """A scan that is expected to produce witnesses produced none."""
