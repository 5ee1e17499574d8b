"""Exception types shared across the package."""


class BoxworldError(Exception):
    """Base class for all package errors."""


class InvalidSpec(BoxworldError):
    """A system description violates a structural invariant (e.g. an outcome count of 1)."""


class InvalidLabel(BoxworldError):
    """An effect label is out of range or has the wrong arity for its system."""


class InvalidAssignment(BoxworldError):
    """A deterministic outcome assignment is incomplete or out of range."""


class DimensionError(BoxworldError):
    """Vector or label dimensions do not match."""


class ClassicalSystemUnsupported(BoxworldError):
    """A theorem-level operation was asked to run on a single-measurement (classical) system."""


class NotInCone(BoxworldError):
    """The target effect is not a nonnegative integer combination of fiducial effects."""


class ResourceBudgetExceeded(BoxworldError):
    """An enumeration exceeded its configured node or ray budget."""


class InvalidWitnessProblem(BoxworldError):
    """A witness problem violates the preconditions of its mode."""


class ConstructionBug(BoxworldError):
    """A constructive witness failed its own output validation; never expected."""


class PreconditionNotMet(BoxworldError):
    """A verification was invoked on inputs outside its stated precondition."""


class ParseError(BoxworldError):
    """Malformed system description file or label expression."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
            message = message + where
        super().__init__(message)
