class CurveMedError(Exception):
    """Base class for every error raised by curvemed."""


class ParameterError(CurveMedError, ValueError):
    """An argument is outside the range an algorithm accepts."""


class ResourceError(CurveMedError):
    """A grid or enumeration would exceed its configured cap."""


class DatasetError(CurveMedError):
    """A dataset file is malformed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
