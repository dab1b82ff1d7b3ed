"""
Utility functions for Container Lab.

This package contains the family file format and logging setup.

Note: file_io imports the constructions engine (for SetPairFamily), so
importing anything from this package pulls in numpy.
"""

# Family files
from .file_io import (
    load_family,
    save_family,
    parse_family,
    format_family,
    load_set_pairs,
    save_set_pairs,
)

# Logging
from .logging_setup import configure_logging

__all__ = [
    # Family files
    'load_family',
    'save_family',
    'parse_family',
    'format_family',
    'load_set_pairs',
    'save_set_pairs',
    # Logging
    'configure_logging',
]
