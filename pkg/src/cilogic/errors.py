"""Exception hierarchy shared by every module."""


class CiLogicError(Exception):
    """Base class for all errors raised by cilogic."""


class InputError(CiLogicError, ValueError):
    """Malformed or inconsistent arguments (unknown nodes, overlapping sets)."""


class StructuralError(InputError):
    """A graph violates a structural invariant, e.g. it contains a cycle."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class ParseError(InputError):
    """Text input could not be parsed; carries 1-based line and column."""

    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)


class ResourceLimitError(CiLogicError):
    """A configured size limit or search budget was exceeded."""


class LogicError(CiLogicError):
    """An operation was asked for something that cannot exist."""


class NumericError(CiLogicError, ArithmeticError):
    """Exact linear algebra hit a singular system."""
