class RepairForgeError(Exception):
    """Base class for every error raised by repairforge."""

    def details(self) -> dict:
        return {}


class ParseError(RepairForgeError, ValueError):
    """Raised when an input text does not follow its grammar."""

    def __init__(
        self, message: str, line: int | None = None, column: int | None = None
    ):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)

    def details(self) -> dict:
        return {"line": self.line, "column": self.column}


class FactsSyntaxError(ParseError):
    pass


class ConstraintSyntaxError(ParseError):
    pass


class ArityMismatchError(ParseError):
    def __init__(
        self,
        relation: str,
        expected: int,
        found: int,
        line: int | None = None,
        column: int | None = None,
    ):
        self.relation = relation
        self.expected = expected
        self.found = found
        super().__init__(
            f"relation {relation} declared with arity {expected}, found {found}",
            line,
            column,
        )

    def details(self) -> dict:
        return {
            **super().details(),
            "relation": self.relation,
            "expected": self.expected,
            "found": self.found,
        }


class UnsafeVariableError(ParseError):
    def __init__(
        self, variable: str, line: int | None = None, column: int | None = None
    ):
        self.variable = variable
        super().__init__(
            f"variable {variable} occurs in a comparison but in no atom", line, column
        )

    def details(self) -> dict:
        return {**super().details(), "variable": self.variable}


class EmptyConstraintError(ParseError):
    pass


class ComparisonTypeError(RepairForgeError, TypeError):
    """Raised when an order comparison involves a symbol."""


class LimitExceededError(RepairForgeError):
    """Raised when a resource guard trips. Results are never truncated."""

    def __init__(self, limit_name: str, limit: int, reached: int):
        self.limit_name = limit_name
        self.limit = limit
        self.reached = reached
        super().__init__(f"limit {limit_name}={limit} exceeded (reached {reached})")

    def details(self) -> dict:
        return {"limit": self.limit_name, "value": self.limit, "reached": self.reached}


class ClassificationError(RepairForgeError, ValueError):
    """Raised when a fast path is asked for a constraint of the wrong class."""


class EmptyEdgeError(RepairForgeError, ValueError):
    """Raised when a transversal is requested for a hypergraph with an empty edge."""


class NotAntichainError(RepairForgeError, ValueError):
    pass


class PreconditionError(RepairForgeError, ValueError):
    pass


class UsageError(RepairForgeError):
    """Raised for a malformed command line."""
