"""Exception hierarchy shared by every module."""


class PsiConcError(Exception):
    """Base class for all library errors."""


class DomainError(PsiConcError, ValueError):
    """A point lies outside the domain of a transform or a formula."""


class RangeError(PsiConcError, ValueError):
    """A value lies outside the image of a transform."""


class InvalidArgument(PsiConcError, ValueError):
    pass


class InvalidParameters(InvalidArgument):
    """Distribution or family parameters out of range."""


class InsufficientData(PsiConcError, ValueError):
    pass


class DegenerateData(PsiConcError, ValueError):
    pass


class EmptyGrid(PsiConcError, ValueError):
    pass


class EmptySample(PsiConcError, ValueError):
    pass


class UnknownFamily(PsiConcError, KeyError):
    pass


class NonPositiveResponse(DomainError):
    pass


class RankDeficient(PsiConcError, ValueError):
    pass


class NotSpd(PsiConcError, ValueError):
    pass


class DimensionMismatch(PsiConcError, ValueError):
    pass


class ParseError(PsiConcError, ValueError):
    """Malformed input file; message names the offending line."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class NumericalError(PsiConcError, ArithmeticError):
    """An iterative routine failed to converge."""
