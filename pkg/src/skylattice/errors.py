"""Exception types shared by every module of the package."""


class SkylatticeError(Exception):
    """Base class for errors raised by this package."""


class SchemaError(SkylatticeError):
    """Input does not match the declared schema: columns, criteria or store layout."""


class DataError(SkylatticeError):
    """A cell value cannot be used as a criterion value."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ContractViolation(SkylatticeError):
    """An operation was called outside its documented contract."""
