"""
Error families
Every failure the toolkit reports belongs to one family with a distinct CLI exit code.
"""

from typing import Any, Dict, Optional


class TrafficToolkitError(Exception):
    """
    Base class for toolkit errors
    - carries a CLI exit code
    - carries structured context for logging
    """

    exit_code = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        """Error as a loggable / JSON-able dict"""
        return {
            "error_type": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            **self.context,
        }


class InvalidArgumentError(TrafficToolkitError, ValueError):
    """Parameter outside its domain (Δ ≤ 0, p ≤ 0, non-dyadic length, ...)"""

    exit_code = 3


class EmptyInputError(TrafficToolkitError):
    """Input holds no usable values"""

    exit_code = 4


class TraceParseError(TrafficToolkitError):
    """A trace line could not be parsed"""

    exit_code = 5

    def __init__(self, message: str, line_number: int, **context: Any):
        super().__init__(f"line {line_number}: {message}", line_number=line_number, **context)
        self.line_number = line_number


class TraceValidationError(TrafficToolkitError):
    """A trace line parsed but holds an invalid value"""

    exit_code = 6

    def __init__(self, message: str, line_number: int, **context: Any):
        super().__init__(f"line {line_number}: {message}", line_number=line_number, **context)
        self.line_number = line_number


class DegenerateInputError(TrafficToolkitError):
    """Zero variance, all-0 or all-1 input"""

    exit_code = 7


class InsufficientDataError(TrafficToolkitError):
    """Too few windows, scales or pairs for the requested statistic"""

    exit_code = 8


class ConfigError(TrafficToolkitError):
    """Invalid run configuration; names the offending keys"""

    exit_code = 9

    def __init__(self, message: str, keys: Optional[list] = None, **context: Any):
        super().__init__(message, keys=list(keys or []), **context)
        self.keys = list(keys or [])
