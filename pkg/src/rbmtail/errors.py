"""Exception hierarchy shared by every module."""


class RBMError(Exception):
    """Base class for all library errors."""


class DomainError(RBMError, ValueError):
    """An argument lies outside the domain of the operation."""


class EmptyAfterFiltering(RBMError, ValueError):
    """Fewer than two positive observations survived filtering."""


class TooLargeToEnumerate(RBMError, ValueError):
    """Brute-force subset enumeration was requested on too many points."""


class PathTooShort(RBMError, ValueError):
    pass


class NoAdmissibleThreshold(RBMError, ValueError):
    pass


class UnknownDistribution(RBMError, ValueError):
    pass


class Unsupported(RBMError, NotImplementedError):
    pass


class FactorizationFailure(RBMError, ArithmeticError):
    """Cholesky factorization failed even at the largest allowed jitter."""


class InputFormatError(RBMError, ValueError):
    """A line of an input data file could not be parsed."""

    def __init__(self, lineno: int, text: str):
        self.lineno = lineno
        self.text = text
        super().__init__(f"line {lineno}: cannot parse {text!r} as a decimal number")
