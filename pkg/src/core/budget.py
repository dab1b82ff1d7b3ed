"""
Enumeration Budgets — Container Lab
===================================

Every exhaustive operation takes an ``EnumBudget`` and reports honest failure
(``BudgetExceeded``) instead of running unbounded.  Defaults are desk-scale:
2^20 expanded nodes, 60 seconds and 1024 vertices per operation; the vertex
cap only rejects graphs no desk-scale search could finish.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Any, Callable, Optional

from src.core.errors import BudgetExceeded, ParameterError


DEFAULT_MAX_NODES = 1 << 20
DEFAULT_TIMEOUT = 60.0
DEFAULT_MAX_VERTICES = 1024


@dataclass(frozen=True)
class EnumBudget:
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_nodes_expanded: int = DEFAULT_MAX_NODES
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_nodes_expanded <= 0 or self.timeout <= 0:
            raise ParameterError(f"budget fields must be positive: {self}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "EnumBudget":
        data = data or {}
        return cls(
            max_vertices=int(data.get("max_vertices", DEFAULT_MAX_VERTICES)),
            max_nodes_expanded=int(data.get("max_nodes_expanded", DEFAULT_MAX_NODES)),
            timeout=float(data.get("timeout", DEFAULT_TIMEOUT)),
        )

    def with_overrides(self, max_vertices: Optional[int] = None,
                       max_nodes_expanded: Optional[int] = None,
                       timeout: Optional[float] = None) -> "EnumBudget":
        return EnumBudget(
            max_vertices=self.max_vertices if max_vertices is None else max_vertices,
            max_nodes_expanded=(self.max_nodes_expanded if max_nodes_expanded is None
                                else max_nodes_expanded),
            timeout=self.timeout if timeout is None else timeout,
        )

    def check_vertices(self, count: int, label: str) -> None:
        if count > self.max_vertices:
            raise BudgetExceeded(
                f"{label}: {count} vertices exceed the budget of {self.max_vertices}")

    def check_candidates(self, count: int, label: str) -> None:
        if count > self.max_nodes_expanded:
            raise BudgetExceeded(
                f"{label}: {count} candidates exceed the budget of "
                f"{self.max_nodes_expanded} nodes")

    def tracker(self, label: str) -> "BudgetTracker":
        return BudgetTracker(self, label)


class BudgetTracker:
    """Counts expanded nodes for one operation and enforces its budget."""

    def __init__(self, budget: EnumBudget, label: str):
        self.budget = budget
        self.label = label
        self.nodes = 0
        self.started = time.monotonic()

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def tick(self, partial: Optional[Callable[[], Any]] = None) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes_expanded:
            raise BudgetExceeded(
                f"{self.label}: expanded more than {self.budget.max_nodes_expanded} nodes",
                nodes=self.nodes, elapsed=self.elapsed,
                partial=partial() if partial else None)
        if self.nodes & 0x3FF == 0 and self.elapsed > self.budget.timeout:
            raise BudgetExceeded(
                f"{self.label}: exceeded {self.budget.timeout:g}s",
                nodes=self.nodes, elapsed=self.elapsed,
                partial=partial() if partial else None)
