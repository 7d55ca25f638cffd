"""
Error Handling Utilities
Custom exceptions and the command-line error handler for the selection library

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
import functools
import logging
import sys
import uuid

EXIT_OK = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_USAGE_ERROR = 2


class SelectionError(Exception):
    """Base selection library exception"""

    def __init__(self, message, exit_code=EXIT_VERIFICATION_FAILURE, payload=None):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
        self.payload = payload or {}
        self.trace_id = str(uuid.uuid4())

    def to_dict(self):
        """Convert exception to dictionary for JSON output"""
        rv = dict(self.payload or ())
        rv['error'] = self.message
        if self.exit_code == EXIT_VERIFICATION_FAILURE:
            rv['trace_id'] = self.trace_id
        return rv


class ValidationError(SelectionError):
    """Usage or input error (exit code 2)"""

    def __init__(self, message, details=None):
        super().__init__(message, exit_code=EXIT_USAGE_ERROR, payload={'details': details or {}})


class EmptyInputError(ValidationError):
    """Operation received an empty sequence"""

    def __init__(self, message="empty input"):
        super().__init__(message)


class RankOutOfBoundsError(ValidationError):
    """Target rank outside 1..n"""

    def __init__(self, i, n):
        super().__init__("rank out of bounds", details={'i': i, 'n': n})


class GroupTooLargeError(ValidationError):
    """Group exceeds the small-median networks"""

    def __init__(self, size):
        super().__init__("group too large for small-median network", details={'size': size})


class ExhaustiveDomainError(ValidationError):
    """Exhaustive permutation domain is out of range"""

    def __init__(self, n):
        super().__init__("exhaustive domain too large", details={'n': n})


class InputFormatError(ValidationError):
    """Malformed numbers, generator strings or spec files"""


class OutputPathError(ValidationError):
    """Output file or directory cannot be created or written"""

    def __init__(self, path, reason):
        super().__init__(f"cannot write '{path}': {reason}", details={'path': path})


class ExperimentSpecError(ValidationError):
    """Invalid experiment specification"""


class InsufficientSizesError(ValidationError):
    """Too few sizes, or too narrow a span, for a growth fit"""


class PivotNotFoundError(SelectionError):
    """Partition pivot does not occur in the sequence"""

    def __init__(self, message="pivot not in sequence"):
        super().__init__(message)


class BoundNotRegisteredError(SelectionError):
    """No discard bound is registered for the algorithm"""

    def __init__(self, algorithm):
        super().__init__("no bound registered", payload={'algorithm': str(algorithm)})


class TraceStructureError(SelectionError):
    """Trace events are malformed or not consecutive"""


class InvariantViolationError(SelectionError):
    """An instrumentation check failed on a live run"""


def handle_cli_errors(func):
    """
    Wrap a CLI command so that library errors become an exit code
    Args:
        func: Command function returning an exit code
    Returns:
        Wrapped function
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SelectionError as error:
            if error.exit_code == EXIT_VERIFICATION_FAILURE:
                logging.error(f"SelectionError [{error.trace_id}]: {error.message}")
            info = error.to_dict()
            print(f"error: {info.pop('error')}", file=sys.stderr)
            for key, value in info.items():
                if value:
                    print(f"{key}: {value}", file=sys.stderr)
            return error.exit_code

    return wrapper


def validate_required_fields(data, required_fields):
    """
    Validate a document contains required fields
    Args:
        data: Parsed document dictionary
        required_fields: List of required field names
    Raises:
        ExperimentSpecError: If validation fails
    """
    missing_fields = [field for field in required_fields
                      if field not in data or data[field] is None]

    if missing_fields:
        raise ExperimentSpecError(
            'Missing required fields',
            details={'missing_fields': missing_fields}
        )
