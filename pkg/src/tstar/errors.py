"""Exception hierarchy shared across the package."""


class TstarError(Exception):
    """Base class for all errors raised by this package."""


class AmrError(TstarError, ValueError):
    """An AMR graph violates a structural invariant."""


class PenmanSyntaxError(AmrError):
    """Penman text could not be parsed.

    ``position`` is the character offset of the offending token (or ``None``
    when the error is not tied to one location).
    """

    def __init__(self, message, position=None, text=None):
        self.position = position
        if position is not None and text is not None:
            line = text.count("\n", 0, position) + 1
            col = position - (text.rfind("\n", 0, position) + 1) + 1
            message = f"{message} (line {line}, column {col})"
        elif position is not None:
            message = f"{message} (offset {position})"
        super().__init__(message)


class DuplicateVariableError(PenmanSyntaxError):
    pass


class UndefinedVariableError(PenmanSyntaxError):
    pass


class UnrecoverableAmrError(AmrError):
    """A token sequence could not be turned into a graph even after repair."""


class SmatchSizeError(TstarError, ValueError):
    """Exhaustive SMATCH was asked to enumerate mappings beyond its bound."""


class IncomparableInputsError(TstarError, ValueError):
    """Two inputs cannot be compared (e.g. an extraction came out empty)."""


class EmptyExtractionError(IncomparableInputsError):
    pass


class EmbeddingFormatError(TstarError, ValueError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class UnknownStyleError(TstarError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown style"


class InstanceSchemaError(TstarError, ValueError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class BackendError(TstarError):
    """A model backend failed to answer a request."""


class BackendTimeout(BackendError):
    pass


class BackendUnreachable(BackendError):
    pass


class BackendProtocolError(BackendError):
    pass


class BackendHTTPError(BackendError):
    def __init__(self, status_code, message=""):
        self.status_code = status_code
        super().__init__(f"HTTP {status_code}: {message}" if message else f"HTTP {status_code}")


class BackendTrainingError(BackendError):
    pass


class PipelineAbort(TstarError):
    """The pipeline stopped; ``iteration`` is the loop index that failed (0 = bootstrap)."""

    def __init__(self, message, iteration=None):
        self.iteration = iteration
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)
