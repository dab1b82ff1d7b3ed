"""
Container Lab — exact small-n experiments for the graph container method.

This package implements the Kleitman–Winston container algorithm on implicit
auxiliary graphs over the Boolean lattice, exhaustive enumeration oracles,
supersaturation checks, code and Katona bounds, explicit extremal
constructions, and a command-line front end with reproducible JSON/CSV
reports.
"""

__version__ = "1.0.0"
__author__  = "Container Lab contributors"
__license__ = "MIT"
