"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input data violates a structural invariant.

    Raised for non-symmetric matrices, non-unimodular forms presented as
    closed-manifold data, non-characteristic w2 vectors, dimension
    mismatches, and malformed descriptor fields.
    """


class DescriptorError(ValidationError):
    """A descriptor document could not be parsed.

    Carries the line/column of the offending location when the underlying
    JSON decoder provides one.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SearchBudgetError(RuntimeError):
    """A matrix search was refused because its candidate space exceeds the step budget."""
