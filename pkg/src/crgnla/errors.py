"""Exception hierarchy.

The CLI maps these onto exit codes: :class:`CheckFailure` -> 1,
:class:`UsageError` -> 2, :class:`InternalConsistencyError` -> 3.
"""


class CRGnlaError(Exception):
    pass


class CheckFailure(CRGnlaError):
    """A verification produced a negative verdict."""


class UsageError(CRGnlaError):
    pass


class InternalConsistencyError(CRGnlaError):
    """A computation contradicts a theorem the library relies on; always a bug."""


class SpecializeParametersError(UsageError):
    pass


class ValidationError(CheckFailure):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFundamentalError(CheckFailure):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotDeprolongableError(CheckFailure):
    pass


class ResourceLimitError(UsageError):
    pass


class ParseError(UsageError):
    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)
        self.pos = pos


class RealityError(UsageError):
    pass


class HomogeneityError(UsageError):
    pass


class ClosureError(CheckFailure):
    pass
