"""Exception types shared across the library.

Every domain failure raises a subclass of ``LieGrowthError`` so the CLI can
report the error name and exit with status 1, keeping usage errors (status 2)
separate.
"""


class LieGrowthError(Exception):
    pass


class DomainError(LieGrowthError):
    """Arguments outside the mathematical domain of an operation."""


class CapExceeded(LieGrowthError):
    """A combinatorial enumeration would exceed its configured element cap."""


class OrderOverflow(LieGrowthError):
    """A jet-coordinate operation would exceed the ambient derivative order."""


class IncompleteJet(LieGrowthError):
    """A jet point is missing coordinates required by an evaluation."""


class DegenerateFrame(LieGrowthError):
    """Frame vectors are linearly dependent at the queried point."""


class NormalDirection(LieGrowthError):
    """The probing direction is orthogonal to the span of the frame."""


class NotFormalSolution(LieGrowthError):
    """The frame does not realize the maximal growth vector at the point."""


class InconsistentFormalSolution(LieGrowthError):
    """Computed ranks contradict the dimension count of a formal solution."""


class Unclassified(LieGrowthError):
    """Matrix-space parameters fall outside the classified case table."""


class NotAmple(LieGrowthError):
    """Refused: the requested convex decomposition cannot exist."""


class InvalidAlgebra(LieGrowthError):
    """A structure-constant table failed validation; carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"{report.kind}: {report.detail}")


class ParseError(LieGrowthError):
    """Input text rejected, with 1-based line/column of the offending token."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})")
