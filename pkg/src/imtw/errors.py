"""Exception types shared across the package."""


class ImtwError(Exception):
    """Base class for all package errors."""


class ResourceLimitError(ImtwError):
    """An exhaustive routine would exceed its configured guard."""


class ContractError(ImtwError, ValueError):
    """A precondition of an operation does not hold."""


class InvariantError(ImtwError, AssertionError):
    """An internal invariant failed. Indicates a bug or a precondition breach."""


class NotSuperniceError(ContractError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ParseError(ImtwError, ValueError):
    def __init__(self, message, line=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.path = path
