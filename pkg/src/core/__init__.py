"""
Core module for Container Lab.

This package contains the value types and algorithms every engine builds on:
lattice encodings, implicit auxiliary graphs, the container algorithm,
budgets and the exception hierarchy.
"""

from .budget import EnumBudget
from .containers import Schedule, replay_run, run_kw, verify_container_property
from .errors import BudgetExceeded, ContainerLabError, ParameterError
from .graphs import ImplicitGraph, parse_graph_spec
from .lattice import SCD, Family, binomial, build_scd

__all__ = [
    'EnumBudget',
    'Schedule',
    'run_kw',
    'replay_run',
    'verify_container_property',
    'ContainerLabError',
    'ParameterError',
    'BudgetExceeded',
    'ImplicitGraph',
    'parse_graph_spec',
    'Family',
    'SCD',
    'binomial',
    'build_scd',
]
