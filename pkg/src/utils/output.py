"""
Output Path Utilities
Create output directories up front and report write failures as OutputPathError
"""
import os
from contextlib import contextmanager

from src.utils.errors import OutputPathError


@contextmanager
def output_errors(path):
    """Re-raise OSError from the wrapped block as OutputPathError for path"""
    try:
        yield
    except OSError as e:
        raise OutputPathError(path, e.strerror or str(e)) from e


def prepare_output_path(path):
    """
    Make sure path can be written before any work is spent on it

    Creates the parent directory when missing.

    Raises:
        OutputPathError: parent cannot be created, path is a directory, or the
            directory is not writable
    """
    directory = os.path.dirname(path) or '.'
    with output_errors(path):
        os.makedirs(directory, exist_ok=True)
    if os.path.isdir(path):
        raise OutputPathError(path, "is a directory")
    if not os.access(directory, os.W_OK):
        raise OutputPathError(path, "directory is not writable")
    return path
