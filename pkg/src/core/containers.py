"""
Container Engine — Container Lab
================================

The graph container algorithm.  One run walks the graph in order of
maximum current degree (ties to the smaller canonical index) and, for an
independent set I and the current stage parameter Δ:

  u ∉ I              skip       remove u
  u ∈ I, deg >= Δ    expand     add u to S, remove u and N_G(u)
  u ∈ I, deg <  Δ    terminate  add u to S, remove u, f(S) := what is left

N_G(u) is the neighbourhood in the original graph.  If the graph empties
without a terminate step, f(S) = ∅.  The stage advances while the number of
remaining vertices is below the current stage's switch threshold.

``replay`` runs the same walk with "u ∈ I?" answered by "u ∈ S", so a
fingerprint alone reproduces its container.

Degrees are maintained incrementally in a heap keyed ``(-degree, index)``
with lazy deletion.
"""

from __future__ import annotations

import heapq
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from src.core.budget import EnumBudget
from src.core.errors import InvalidFingerprint, ParameterError
from src.core.graphs import ImplicitGraph, iter_independent_sets
from src.core.lattice import Family, binomial, iter_bits
from src.core.utils import format_fraction, parse_fraction_list, parse_int_list

log = logging.getLogger(__name__)

SKIP = "skip"
EXPAND = "expand"
TERMINATE = "terminate"


# ---------------------------------------------------------------------------
# Schedule
# ---------------------------------------------------------------------------

class Stage(NamedTuple):
    delta: Fraction
    switch_below: Optional[int] = None


class Schedule:
    """
    Ordered stages of (Δ, switch threshold).  Δ strictly decreases; every
    stage but the last needs a threshold on |V(G_i)|.
    """

    def __init__(self, stages: Iterable[Stage]):
        stages = tuple(Stage(Fraction(s[0]), None if s[1] is None else int(s[1]))
                       for s in stages)
        if not stages:
            raise ParameterError("schedule needs at least one stage")
        for s in stages:
            if s.delta <= 0:
                raise ParameterError(f"stage Δ must be positive, got {s.delta}")
        for a, b in zip(stages, stages[1:]):
            if b.delta >= a.delta:
                raise ParameterError(
                    f"stage Δ must strictly decrease, got {a.delta} then {b.delta}")
        for s in stages[:-1]:
            if s.switch_below is None:
                raise ParameterError("only the final stage may omit its switch threshold")
        self.stages = stages

    @classmethod
    def single(cls, delta) -> "Schedule":
        return cls([Stage(Fraction(delta), None)])

    @classmethod
    def two_stage(cls, switch_below: int, delta_large, delta_small) -> "Schedule":
        return cls([Stage(Fraction(delta_large), switch_below),
                    Stage(Fraction(delta_small), None)])

    @classmethod
    def parse(cls, deltas: str, switches: Optional[str] = None) -> "Schedule":
        """
        ``--delta 8,2 --switch 10`` -> [(Δ=8, switch below 10), (Δ=2, final)].
        """
        ds = parse_fraction_list(deltas, "delta")
        sw = parse_int_list(switches, "switch")
        if not ds:
            raise ParameterError("schedule needs at least one Δ")
        if len(sw) not in (len(ds) - 1, len(ds)):
            raise ParameterError(
                f"{len(ds)} Δ values need {len(ds) - 1} switch thresholds, got {len(sw)}")
        sw = sw + [None] * (len(ds) - len(sw))
        return cls([Stage(d, s) for d, s in zip(ds, sw)])

    @property
    def final_delta(self) -> Fraction:
        return self.stages[-1].delta

    def __len__(self) -> int:
        return len(self.stages)

    def __eq__(self, other) -> bool:
        return isinstance(other, Schedule) and self.stages == other.stages

    def __hash__(self) -> int:
        return hash(self.stages)

    def __repr__(self) -> str:
        return f"Schedule({self.describe()})"

    def describe(self) -> str:
        return "; ".join(
            f"Δ={format_fraction(s.delta)}" + (f" until |V|<{s.switch_below}"
                                               if s.switch_below is not None else "")
            for s in self.stages)

    def to_dict(self) -> dict:
        return {"stages": [{"delta": format_fraction(s.delta), "switch_below": s.switch_below}
                           for s in self.stages]}

    def fingerprint_bound(self, num_vertices: int) -> Fraction:
        """|V| / Δ_final + number of stages."""
        return Fraction(num_vertices) / self.final_delta + len(self.stages)


# ---------------------------------------------------------------------------
# Runs
# ---------------------------------------------------------------------------

class Step(NamedTuple):
    step: int
    vertex: object
    branch: str
    stage: int


@dataclass
class ContainerRun:
    fingerprint: Family
    container: Family
    remainder: Family
    trace: Tuple[Step, ...]
    terminated: bool
    fingerprint_bits: int = 0
    container_bits: int = 0

    def to_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint.to_dict(),
            "container": self.container.to_dict(),
            "terminated": self.terminated,
            "trace": [{"step": s.step, "vertex": str(s.vertex), "branch": s.branch,
                       "stage": s.stage} for s in self.trace],
        }


class _Walk:
    """Mutable state of one run over index bitsets."""

    def __init__(self, graph: ImplicitGraph):
        self.graph = graph
        size = graph.num_vertices
        self.alive = graph.all_bits
        self.alive_count = size
        self.degree = [graph.neighbor_bits(i).bit_count() for i in range(size)]
        self.heap = [(-d, i) for i, d in enumerate(self.degree)]
        heapq.heapify(self.heap)

    def pop_max(self) -> int:
        while True:
            neg, i = heapq.heappop(self.heap)
            if self.alive >> i & 1 and -neg == self.degree[i]:
                return i

    def remove(self, i: int) -> None:
        self.alive &= ~(1 << i)
        self.alive_count -= 1
        for x in iter_bits(self.graph.neighbor_bits(i) & self.alive):
            self.degree[x] -= 1
            heapq.heappush(self.heap, (-self.degree[x], x))


def _execute(graph: ImplicitGraph, schedule: Schedule, in_set: Callable[[int], bool],
             on_neighbor_removed: Optional[Callable[[int], None]] = None,
             keep_trace: bool = True):
    walk = _Walk(graph)
    stage = 0
    chosen: List[int] = []
    trace: List[Step] = []
    terminated = False
    step = 0
    stages = schedule.stages
    while walk.alive:
        while (stage < len(stages) - 1 and stages[stage].switch_below is not None
               and walk.alive_count < stages[stage].switch_below):
            stage += 1
        delta = stages[stage].delta
        step += 1
        u = walk.pop_max()
        deg = walk.degree[u]
        if not in_set(u):
            walk.remove(u)
            branch = SKIP
        elif deg >= delta:
            chosen.append(u)
            neighbours = graph.neighbor_bits(u) & walk.alive
            walk.remove(u)
            for w in iter_bits(neighbours):
                if on_neighbor_removed is not None:
                    on_neighbor_removed(w)
                walk.remove(w)
            branch = EXPAND
        else:
            chosen.append(u)
            walk.remove(u)
            branch = TERMINATE
            terminated = True
        if keep_trace:
            trace.append(Step(step, graph.vertex(u), branch, stage))
        if terminated:
            break
    remainder = walk.alive if terminated else 0
    return chosen, remainder, tuple(trace), terminated


def _as_run(graph: ImplicitGraph, chosen: List[int], remainder: int,
            trace: Tuple[Step, ...], terminated: bool) -> ContainerRun:
    s_bits = 0
    for i in chosen:
        s_bits |= 1 << i
    return ContainerRun(
        fingerprint=graph.family_of(s_bits),
        container=graph.family_of(s_bits | remainder),
        remainder=graph.family_of(remainder),
        trace=trace,
        terminated=terminated,
        fingerprint_bits=s_bits,
        container_bits=s_bits | remainder,
    )


def run_kw(graph: ImplicitGraph, independent: Iterable, schedule: Schedule,
           keep_trace: bool = True) -> ContainerRun:
    """
    Run the container algorithm for an independent set of ``graph``.

    Raises:
        NotIndependentError: ``independent`` contains an edge.
    """
    independent = list(independent)
    graph.require_independent(independent)
    i_bits = graph.bits_of(independent)
    return run_kw_bits(graph, i_bits, schedule, keep_trace)


def run_kw_bits(graph: ImplicitGraph, i_bits: int, schedule: Schedule,
                keep_trace: bool = False) -> ContainerRun:
    """``run_kw`` on an index bitset already known to be independent."""
    chosen, remainder, trace, terminated = _execute(
        graph, schedule, lambda u: bool(i_bits >> u & 1), keep_trace=keep_trace)
    return _as_run(graph, chosen, remainder, trace, terminated)


def replay_run(graph: ImplicitGraph, fingerprint: Iterable, schedule: Schedule,
               keep_trace: bool = True) -> ContainerRun:
    """
    Replay a candidate fingerprint.

    Raises:
        InvalidFingerprint: a member of S is removed before it is chosen, or
            the walk ends with members of S never chosen.
    """
    return replay_bits(graph, graph.bits_of(fingerprint), schedule, keep_trace)


def replay_bits(graph: ImplicitGraph, s_bits: int, schedule: Schedule,
                keep_trace: bool = False) -> ContainerRun:
    def neighbour_removed(w: int) -> None:
        if s_bits >> w & 1:
            raise InvalidFingerprint(
                f"{graph.vertex(w)} is removed as a neighbour before it is chosen")

    chosen, remainder, trace, terminated = _execute(
        graph, schedule, lambda u: bool(s_bits >> u & 1), neighbour_removed, keep_trace)
    consumed = 0
    for i in chosen:
        consumed |= 1 << i
    missing = s_bits & ~consumed
    if missing:
        left = [str(graph.vertex(i)) for i in iter_bits(missing)]
        raise InvalidFingerprint(f"walk ended without choosing {', '.join(left)}")
    return _as_run(graph, chosen, remainder, trace, terminated)


def replay(graph: ImplicitGraph, fingerprint: Iterable, schedule: Schedule) -> Family:
    """The container S ∪ f(S) determined by a fingerprint."""
    return replay_run(graph, fingerprint, schedule, keep_trace=False).container


# ---------------------------------------------------------------------------
# Enumeration of containers
# ---------------------------------------------------------------------------

def _candidate_fingerprints(graph: ImplicitGraph, max_s: int) -> Iterable[int]:
    size = graph.num_vertices
    for r in range(0, min(max_s, size) + 1):
        for combo in combinations(range(size), r):
            bits = 0
            for i in combo:
                bits |= 1 << i
            yield bits


def _try_replay(graph: ImplicitGraph, schedule: Schedule, s_bits: int) -> Optional[int]:
    for i in iter_bits(s_bits):
        if graph.neighbor_bits(i) & s_bits:
            return None
    try:
        return replay_bits(graph, s_bits, schedule).container_bits
    except InvalidFingerprint:
        return None


def enumerate_containers(graph: ImplicitGraph, schedule: Schedule, max_s: int,
                         budget: Optional[EnumBudget] = None,
                         threads: int = 1) -> List[Tuple[Family, Family]]:
    """
    All realizable fingerprints with |S| <= max_s and their containers, in
    canonical order (by |S|, then lexicographic indices).

    Raises:
        BudgetExceeded: more candidates than the budget allows.
    """
    budget = budget or EnumBudget()
    if max_s < 0:
        raise ParameterError(f"max_s must be >= 0, got {max_s}")
    size = graph.num_vertices
    total = sum(binomial(size, r) for r in range(0, min(max_s, size) + 1))
    budget.check_candidates(total, f"enumerate_containers({graph.spec()})")
    log.debug("replaying %d candidate fingerprints on %s", total, graph.spec())

    candidates = list(_candidate_fingerprints(graph, max_s))
    if threads > 1:
        graph.neighbor_table()
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _try_replay(graph, schedule, s), candidates,
                                    chunksize=64))
    else:
        results = [_try_replay(graph, schedule, s) for s in candidates]

    return [(graph.family_of(s), graph.family_of(c))
            for s, c in zip(candidates, results) if c is not None]


def distinct_containers(pairs: Sequence[Tuple[Family, Family]]) -> List[Tuple[Family, int]]:
    """Containers with the number of fingerprints producing each, first-seen order."""
    counts: Dict[Family, int] = {}
    for _, container in pairs:
        counts[container] = counts.get(container, 0) + 1
    return list(counts.items())


def container_upper_bound(containers: Iterable[Family]) -> int:
    """Σ 2^{|F|}: the number of subfamilies of the containers."""
    return sum(1 << len(c) for c in containers)


# ---------------------------------------------------------------------------
# Exhaustive verification
# ---------------------------------------------------------------------------

@dataclass
class ContainerReport:
    graph: str
    schedule: dict
    n_independent_sets: int = 0
    covered: bool = True
    fingerprint_in_set: bool = True
    replay_deterministic: bool = True
    well_defined: bool = True
    fingerprint_bound_ok: bool = True
    max_fingerprint: int = 0
    max_container: int = 0
    n_containers: int = 0
    max_steps: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.covered and self.fingerprint_in_set and self.replay_deterministic
                and self.well_defined and self.fingerprint_bound_ok)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "schedule": self.schedule,
            "n_independent_sets": str(self.n_independent_sets),
            "covered": self.covered,
            "fingerprint_in_set": self.fingerprint_in_set,
            "replay_deterministic": self.replay_deterministic,
            "well_defined": self.well_defined,
            "fingerprint_bound_ok": self.fingerprint_bound_ok,
            "max_fingerprint": self.max_fingerprint,
            "max_container": self.max_container,
            "n_containers": self.n_containers,
            "max_steps": self.max_steps,
            "violations": list(self.violations),
        }


_MAX_LISTED_VIOLATIONS = 10


def verify_container_property(graph: ImplicitGraph, schedule: Schedule,
                              budget: Optional[EnumBudget] = None) -> ContainerReport:
    """
    Run the algorithm on every independent set of ``graph`` and check that
    I ⊆ container, S ⊆ I, replay(S) gives the same container, equal
    fingerprints give equal containers, and |S| <= |V|/Δ_final + stages.

    Raises:
        BudgetExceeded: too many vertices or independent sets.
    """
    budget = budget or EnumBudget()
    budget.check_vertices(graph.num_vertices, f"verify_container_property({graph.spec()})")
    tracker = budget.tracker(f"verify_container_property({graph.spec()})")
    report = ContainerReport(graph=graph.spec(), schedule=schedule.to_dict())
    bound = schedule.fingerprint_bound(graph.num_vertices)
    by_fingerprint: Dict[int, int] = {}
    containers = set()

    def violation(message: str) -> None:
        if len(report.violations) < _MAX_LISTED_VIOLATIONS:
            report.violations.append(message)

    for i_bits in iter_independent_sets(graph, tracker=tracker):
        report.n_independent_sets += 1
        run = run_kw_bits(graph, i_bits, schedule, keep_trace=True)
        s_bits, c_bits = run.fingerprint_bits, run.container_bits
        label = str(graph.family_of(i_bits))
        report.max_steps = max(report.max_steps, len(run.trace))
        if i_bits & ~c_bits:
            report.covered = False
            violation(f"{label} not inside its container")
        if s_bits & ~i_bits:
            report.fingerprint_in_set = False
            violation(f"fingerprint of {label} leaves the set")
        if s_bits.bit_count() > bound:
            report.fingerprint_bound_ok = False
            violation(f"|S|={s_bits.bit_count()} exceeds {format_fraction(bound)} for {label}")
        try:
            replayed = replay_bits(graph, s_bits, schedule).container_bits
        except InvalidFingerprint as exc:
            replayed = None
            violation(f"replay failed for {label}: {exc}")
        if replayed != c_bits:
            report.replay_deterministic = False
            violation(f"replay of the fingerprint of {label} gives another container")
        seen = by_fingerprint.setdefault(s_bits, c_bits)
        if seen != c_bits:
            report.well_defined = False
            violation(f"fingerprint of {label} already produced a different container")
        containers.add(c_bits)
        report.max_fingerprint = max(report.max_fingerprint, s_bits.bit_count())
        report.max_container = max(report.max_container, c_bits.bit_count())

    report.n_containers = len(containers)
    if report.violations:
        log.warning("%s under %s: %d violation(s)", graph.spec(), schedule.describe(),
                    len(report.violations))
    return report


def two_stage_schedule(switch_at: int, delta_large, delta_small) -> Schedule:
    """Δ_large while at least ``switch_at`` vertices remain, then Δ_small."""
    return Schedule.two_stage(switch_at, delta_large, delta_small)


def check_well_defined(graph: ImplicitGraph, schedule: Schedule,
                       budget: Optional[EnumBudget] = None) -> dict:
    """
    Group the runs of every independent set by fingerprint and report the
    fingerprints that lead to more than one container (there should be none).
    """
    budget = budget or EnumBudget()
    budget.check_vertices(graph.num_vertices, f"check_well_defined({graph.spec()})")
    tracker = budget.tracker(f"check_well_defined({graph.spec()})")
    groups: Dict[int, set] = {}
    for i_bits in iter_independent_sets(graph, tracker=tracker):
        run = run_kw_bits(graph, i_bits, schedule)
        groups.setdefault(run.fingerprint_bits, set()).add(run.container_bits)
    conflicts = [str(graph.family_of(s)) for s, cs in groups.items() if len(cs) > 1]
    return {
        "graph": graph.spec(),
        "schedule": schedule.to_dict(),
        "fingerprints": len(groups),
        "well_defined": not conflicts,
        "conflicts": conflicts[:_MAX_LISTED_VIOLATIONS],
    }
