"""Exception hierarchy shared by every statfidelity package."""
from typing import Iterable, List, Sequence, Type


class StatFidelityError(Exception):
    """Base class for all errors raised on purpose by statfidelity."""


class DomainError(StatFidelityError, ValueError):
    """A numerical routine was called outside its domain."""


class ParseError(StatFidelityError, ValueError):
    """Text that should hold a number does not."""


class UndefinedPaperError(StatFidelityError):
    """A paper has neither complete tests nor incomplete p-values."""


class EmptyInputError(StatFidelityError):
    """An operation that needs records received none."""


class DegenerateTableError(StatFidelityError):
    """A contingency table has a zero margin or fewer than two levels."""


class NotNestedError(StatFidelityError):
    """Two regression models cannot be compared by a likelihood-ratio test."""


class UnknownLevelError(StatFidelityError, KeyError):
    """A factor or outcome level does not exist in the data."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ManifestError(StatFidelityError):
    """A manifest or ground-truth file violates its schema."""


class RankDeficiencyError(StatFidelityError):
    """The design matrix has linearly dependent columns."""

    def __init__(self, columns: Sequence[str]):
        self.columns: List[str] = list(columns)
        super().__init__(f"Design matrix is rank deficient; collinear columns: {', '.join(self.columns)}")


class JoinMismatchError(StatFidelityError):
    """Ground-truth rows do not join to scanned tests."""

    def __init__(self, orphans: Iterable[str]):
        self.orphans: List[str] = list(orphans)
        super().__init__(f"{len(self.orphans)} ground-truth rows have no scanned test: {', '.join(self.orphans)}")


def require(condition: bool, error: Type[StatFidelityError], message: str) -> None:
    """Raise ``error(message)`` unless ``condition`` holds."""
    if not condition:
        raise error(message)
