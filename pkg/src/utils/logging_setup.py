"""
Logging for the command-line tools.

All messages go to stderr as ``[module] LEVEL: message`` so JSON written to
stdout is never corrupted.
"""

import logging
import sys

_FORMAT = "[%(short_name)s] %(levelname)s: %(message)s"
_configured = False


class _ShortNameFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.short_name = record.name.rsplit(".", 1)[-1]
        return True


def configure_logging(verbose: bool = False, stream=None) -> logging.Logger:
    """Attach one stderr handler to the ``src`` logger; safe to call twice."""
    global _configured
    root = logging.getLogger("src")
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    if not _configured:
        handler = logging.StreamHandler(stream or sys.stderr)
        handler.addFilter(_ShortNameFilter())
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
        root.propagate = False
        _configured = True
    return root
