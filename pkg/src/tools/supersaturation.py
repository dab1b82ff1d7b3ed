"""
Supersaturation — Container Lab
===============================

Exact edge counters over induced subgraphs and minimiser searches that test
every supersaturation statement at desk scale:

  kleitman   families of size binomial(n,⌊n/2⌋)+x have >= (⌊n/2⌋+1)x comparable pairs
  hamming    |C| >= H(n,t)+x gives >= x·n/(2t) pairs at distance <= 2t
  degree     |C| >= 2H(n,t) has a member of induced degree >= alpha·|C|
  tilt       families of size alpha(tilt)+x have >= x tilted pairs
  transport  |C| >= H(n,k,2t+1)+x gives >= x·k/t close pairs
  mono       families of size binomial(n,⌊n/2⌋)+x have >= x mono-difference pairs
  claim-cd   the fewest disjoint pairs among m sets is attained by top layers
  prop64     the weighted difference-profile inequality is >= x

Bounds are rational; every check compares at the integer level (ceilings).

Minimiser modes
---------------
``exhaustive``  every family of the requested size (budgeted).
``random``      seeded local search: swap one member for one outsider, keep
                the swap if the objective drops, restart ``trials`` times.
                It can only find violations, never certify their absence.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.budget import EnumBudget
from src.core.errors import EmptyFamilyError, ParameterError
from src.core.graphs import (
    ComparabilityGraph,
    HammingGraph,
    ImplicitGraph,
    IntersectionGraph,
    MonoDiffGraph,
    TiltGraph,
    TransportGraph,
    tilted_chain,
)
from src.core.lattice import (
    SCD,
    Family,
    SetMask,
    apply_permutation,
    binomial,
    build_scd,
    check_ground,
    iter_bits,
    layer,
    sample_permutation,
    validate_scd,
)
from src.tools.codes import alpha, alpha_transport, hamming_bound, transport_bound
from src.tools.enumeration import max_independent_set

log = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"
RANDOM = "random"
MODES = (EXHAUSTIVE, RANDOM)

_DEFAULT_PATIENCE = 200


# ---------------------------------------------------------------------------
# Edge counters
# ---------------------------------------------------------------------------

def _edges_in_bits(graph: ImplicitGraph, bits: int) -> int:
    return sum((graph.neighbor_bits(i) & bits).bit_count() for i in iter_bits(bits)) // 2


def count_edges_in_induced(graph: ImplicitGraph, family: Iterable) -> int:
    """Number of edges of ``graph`` with both ends in ``family``."""
    return _edges_in_bits(graph, graph.bits_of(family))


def _max_degree_in_bits(graph: ImplicitGraph, bits: int) -> Tuple[int, int]:
    best_i, best_d = -1, -1
    for i in iter_bits(bits):
        d = (graph.neighbor_bits(i) & bits).bit_count()
        if d > best_d:
            best_i, best_d = i, d
    return best_i, best_d


def max_degree_induced(graph: ImplicitGraph, family: Iterable) -> Tuple[object, int]:
    """
    A member of maximum degree inside ``family`` (smallest index on ties).

    Raises:
        EmptyFamilyError: the family is empty.
    """
    bits = graph.bits_of(family)
    if not bits:
        raise EmptyFamilyError("max_degree_induced needs a nonempty family")
    i, d = _max_degree_in_bits(graph, bits)
    return graph.vertex(i), d


# ---------------------------------------------------------------------------
# Minimiser
# ---------------------------------------------------------------------------

def minimize_over_families(
    graph: ImplicitGraph,
    size: int,
    objective: Callable[[int], object],
    mode: str = EXHAUSTIVE,
    trials: int = 20,
    seed: int = 0,
    budget: Optional[EnumBudget] = None,
    pool: Optional[int] = None,
    patience: int = _DEFAULT_PATIENCE,
) -> Tuple[object, int]:
    """
    Minimum of ``objective`` (a function of an index bitset) over families of
    ``size`` vertices drawn from ``pool``.  Returns (value, witness bits).
    """
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    pool = graph.all_bits if pool is None else pool
    members = list(iter_bits(pool))
    if not 0 <= size <= len(members):
        raise ParameterError(f"family size {size} outside [0, {len(members)}]")
    budget = budget or EnumBudget()

    if mode == EXHAUSTIVE:
        budget.check_candidates(binomial(len(members), size),
                                f"exhaustive minimiser on {graph.spec()}")
        best_value, best_bits = None, 0
        for combo in combinations(members, size):
            bits = 0
            for i in combo:
                bits |= 1 << i
            value = objective(bits)
            if best_value is None or value < best_value:
                best_value, best_bits = value, bits
        return best_value, best_bits

    rng = np.random.default_rng(seed)
    tracker = budget.tracker(f"random minimiser on {graph.spec()}")
    best_value, best_bits = None, 0
    for _ in range(max(1, trials)):
        chosen = [members[i] for i in rng.choice(len(members), size=size, replace=False)]
        bits = 0
        for i in chosen:
            bits |= 1 << i
        value = objective(bits)
        outside = [v for v in members if not bits >> v & 1]
        failures = 0
        while chosen and outside and failures < patience:
            tracker.tick()
            a = int(rng.integers(len(chosen)))
            b = int(rng.integers(len(outside)))
            trial_bits = (bits & ~(1 << chosen[a])) | (1 << outside[b])
            trial_value = objective(trial_bits)
            if trial_value < value:
                chosen[a], outside[b] = outside[b], chosen[a]
                bits, value = trial_bits, trial_value
                failures = 0
            else:
                failures += 1
        if best_value is None or value < best_value:
            best_value, best_bits = value, bits
    return best_value, best_bits


def min_edges_over_families(
    graph: ImplicitGraph,
    size: int,
    mode: str = EXHAUSTIVE,
    trials: int = 20,
    seed: int = 0,
    budget: Optional[EnumBudget] = None,
    pool: Optional[int] = None,
) -> Tuple[int, Family]:
    """Fewest induced edges over families of ``size`` vertices, with a witness."""
    value, bits = minimize_over_families(
        graph, size, lambda b: _edges_in_bits(graph, b), mode, trials, seed, budget, pool)
    return value, graph.family_of(bits)


# ---------------------------------------------------------------------------
# Chains and difference profiles
# ---------------------------------------------------------------------------

def scd_bad_pairs(family: Family, scd: SCD) -> int:
    """
    Pairs of members lying on a common chain of ``scd``.

    Raises:
        ParameterError: the SCD is invalid for the family's ground set.
    """
    problems = validate_scd(scd, family.ground_n)
    if problems:
        raise ParameterError(f"invalid SCD: {problems[0]}")
    per_chain: Dict[int, int] = {}
    for m in family:
        idx = scd.chain_index(m)
        per_chain[idx] = per_chain.get(idx, 0) + 1
    return sum(c * (c - 1) // 2 for c in per_chain.values())


def min_scd_bad_pairs(family: Family, permutations: int, seed: int) -> int:
    """Smallest bad-pair count over ``permutations`` random images of the canonical SCD."""
    base = build_scd(family.ground_n)
    best = None
    for j in range(permutations):
        pi = sample_permutation(family.ground_n, seed + j)
        value = scd_bad_pairs(family, apply_permutation(pi, base))
        best = value if best is None else min(best, value)
    return best


@dataclass
class DifferenceProfile:
    """B[i] = comparable pairs A ⊂ B in the family with |B ∖ A| = i."""

    n: int
    counts: List[int]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def b(self, i: int) -> int:
        return self.counts[i] if 0 <= i < len(self.counts) else 0

    def b_geq(self, N: int) -> int:
        return sum(self.counts[max(N, 0):])

    def weighted_value(self, N: int) -> Fraction:
        """
        B_{>=N} / binomial(⌊n/2⌋+⌈N/2⌉, N)
          + sum_{k<N} B[k] / binomial(⌊n/2⌋+⌈k/2⌉, k).
        """
        half = self.n // 2
        value = Fraction(self.b_geq(N), binomial(half + (N + 1) // 2, N))
        for k in range(1, N):
            value += Fraction(self.b(k), binomial(half + (k + 1) // 2, k))
        return value

    def to_dict(self) -> dict:
        return {"n": self.n, "B": {str(i): c for i, c in enumerate(self.counts) if i and c},
                "total": self.total}


def _profile_of_masks(masks: Sequence[SetMask], n: int) -> DifferenceProfile:
    counts = [0] * (n + 1)
    for a, b in combinations(sorted(masks, key=lambda m: (m.bit_count(), m)), 2):
        if (a & b) == a:
            counts[(b & ~a).bit_count()] += 1
    return DifferenceProfile(n, counts)


def difference_profile(family: Family) -> DifferenceProfile:
    return _profile_of_masks(list(family), family.ground_n)


def count_mono_pairs(family: Family, R: SetMask) -> int:
    """Comparable pairs whose difference lies inside R or inside its complement."""
    return count_edges_in_induced(MonoDiffGraph(family.ground_n, R), family)


def count_comparable_pairs(family: Family) -> int:
    return difference_profile(family).total


# ---------------------------------------------------------------------------
# Top-layer families for disjointness
# ---------------------------------------------------------------------------

def top_layer_min_disjoint(n: int, m: int) -> Tuple[int, Family]:
    """
    Fewest disjoint pairs among families made of full top layers plus the
    best m' sets of the next layer down.
    """
    if not 0 <= m <= 1 << n:
        raise ParameterError(f"family size {m} outside [0, {1 << n}]")
    graph = IntersectionGraph(n, 1)
    full = 0
    remaining = m
    size = n
    while size >= 0 and remaining >= binomial(n, size):
        for mask in layer(n, size):
            full |= 1 << mask
        remaining -= binomial(n, size)
        size -= 1
    if remaining == 0:
        return _edges_in_bits(graph, full), graph.family_of(full)
    best_value, best_bits = None, 0
    for combo in combinations(layer(n, size), remaining):
        bits = full
        for mask in combo:
            bits |= 1 << mask
        value = _edges_in_bits(graph, bits)
        if best_value is None or value < best_value:
            best_value, best_bits = value, bits
    return best_value, graph.family_of(best_bits)


# ---------------------------------------------------------------------------
# Lemma checks
# ---------------------------------------------------------------------------

@dataclass
class LemmaCheck:
    lemma: str
    params: dict
    size: int
    bound: object
    observed_min: object
    witness: Family
    passed: bool
    mode: str
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def show(v):
            if isinstance(v, Fraction):
                return {"num": str(v.numerator), "den": str(v.denominator), "approx": float(v)}
            return str(v)

        out = {
            "lemma": self.lemma,
            "params": self.params,
            "mode": self.mode,
            "size": self.size,
            "bound": show(self.bound),
            "observed_min": show(self.observed_min),
            "witness": self.witness.to_dict(),
            "pass": self.passed,
        }
        for key, value in self.extra.items():
            out[key] = show(value) if isinstance(value, (Fraction, int)) and not isinstance(
                value, bool) else value
        return out


def _ceil_positive(value: Fraction) -> int:
    return max(0, math.ceil(value))


def _edge_check(lemma, graph, size, bound, params, mode, trials, seed, budget,
                extra=None, pool=None) -> LemmaCheck:
    observed, witness = min_edges_over_families(graph, size, mode, trials, seed, budget, pool)
    passed = observed >= bound
    if not passed:
        log.warning("%s on %s: %d pairs < bound %s", lemma, graph.spec(), observed, bound)
    return LemmaCheck(lemma, params, size, bound, observed, witness, passed, mode, extra or {})


def check_kleitman(n: int, x: int, mode: str = EXHAUSTIVE, trials: int = 20, seed: int = 0,
                   budget: Optional[EnumBudget] = None) -> LemmaCheck:
    """Comparable pairs in families of size binomial(n,⌊n/2⌋)+x."""
    middle = binomial(n, n // 2)
    size = middle + x
    if x < 0 or size > 1 << n:
        raise ParameterError(f"x={x} out of range for n={n}")
    bound = (n // 2 + 1) * x
    extra = {}
    if x <= binomial(n, n // 2 + 1):
        witness = layer(n, n // 2) + layer(n, n // 2 + 1)[:x]
        extra["layer_witness_pairs"] = count_edges_in_induced(ComparabilityGraph(n), witness)
    check = _edge_check("kleitman", ComparabilityGraph(n), size, bound, {"n": n, "x": x},
                        mode, trials, seed, budget, extra)
    if "layer_witness_pairs" in extra and mode == EXHAUSTIVE:
        check.extra["equality_attained"] = check.observed_min == extra["layer_witness_pairs"] == bound
    return check


def check_hamming(n: int, t: int, x, mode: str = EXHAUSTIVE, trials: int = 20, seed: int = 0,
                  budget: Optional[EnumBudget] = None,
                  size: Optional[int] = None) -> LemmaCheck:
    """
    Pairs at distance <= 2t in codes of size ⌈H(n,t)+x⌉ (or an explicit
    ``size``); the bound uses the exact excess size - H(n,t).
    """
    H = hamming_bound(n, t)
    size = math.ceil(H + Fraction(x)) if size is None else size
    excess = Fraction(size) - H
    bound = _ceil_positive(excess * n / (2 * t))
    return _edge_check("hamming", HammingGraph(n, t), size, bound,
                       {"n": n, "t": t, "x": str(x)}, mode, trials, seed, budget,
                       {"H": H, "excess": excess})


def check_hamming_degree(n: int, t: int, size: int, mode: str = EXHAUSTIVE, trials: int = 20,
                         seed: int = 0, budget: Optional[EnumBudget] = None) -> LemmaCheck:
    """Some member of a family of size >= 2H(n,t) has induced degree >= alpha·|C|."""
    H = hamming_bound(n, t)
    if size < 2 * H:
        raise ParameterError(f"size {size} is below 2H(n,t) = {2 * H}")
    graph = HammingGraph(n, t)
    target = alpha(n, t) * size
    value, bits = minimize_over_families(
        graph, size, lambda b: _max_degree_in_bits(graph, b)[1], mode, trials, seed, budget)
    return LemmaCheck("hamming-degree", {"n": n, "t": t}, size, target, value,
                      graph.family_of(bits), value >= target, mode, {"alpha": alpha(n, t)})


def check_tilt(n: int, p: int, q: int, x: int, mode: str = EXHAUSTIVE, trials: int = 20,
               seed: int = 0, budget: Optional[EnumBudget] = None) -> LemmaCheck:
    """
    Tilted pairs in families of size (q-p)·binomial(n,⌊n/2⌋)+x.

    The pass/fail bound size - alpha(tilt(n,p,q)) is a floor every family
    meets (dropping one end of each tilted pair leaves a tilted-free family),
    so ``passed`` only guards the oracle and the minimiser.  The statement
    proper, at least x pairs above the (q-p)·binomial reference, is reported
    as ``reference_holds``; at small n it can fail because alpha(tilt)
    exceeds the reference.
    """
    graph = TiltGraph(n, p, q)
    reference = (q - p) * binomial(n, n // 2)
    size = reference + x
    if x < 0 or size > 1 << n:
        raise ParameterError(f"x={x} out of range for n={n}")
    largest, _ = max_independent_set(graph, budget)
    bound = max(0, size - largest)
    check = _edge_check("tilt", graph, size, bound, {"n": n, "p": p, "q": q, "x": x},
                        mode, trials, seed, budget,
                        {"reference_threshold": reference, "largest_tilted_family": largest})
    check.extra["reference_excess"] = check.observed_min - x
    check.extra["reference_holds"] = check.observed_min >= x
    return check


def check_transport(n: int, k: int, t: int, x, mode: str = EXHAUSTIVE, trials: int = 20,
                    seed: int = 0, budget: Optional[EnumBudget] = None,
                    size: Optional[int] = None) -> LemmaCheck:
    """Close pairs in families of size ⌈H(n,k,2t+1)+x⌉ of disjoint pairs."""
    H = transport_bound(n, k, 2 * t + 1)
    size = math.ceil(H + Fraction(x)) if size is None else size
    excess = Fraction(size) - H
    bound = _ceil_positive(excess * k / t)
    return _edge_check("transport", TransportGraph(n, k, t), size, bound,
                       {"n": n, "k": k, "t": t, "x": str(x)}, mode, trials, seed, budget,
                       {"H": H, "excess": excess})


def check_transport_degree(n: int, k: int, t: int, size: int, mode: str = EXHAUSTIVE,
                           trials: int = 20, seed: int = 0,
                           budget: Optional[EnumBudget] = None) -> LemmaCheck:
    """Some member of a family of size >= 2H(n,k,2t+1) has degree >= alpha·|C|."""
    H = transport_bound(n, k, 2 * t + 1)
    if size < 2 * H:
        raise ParameterError(f"size {size} is below 2H(n,k,2t+1) = {2 * H}")
    graph = TransportGraph(n, k, t)
    target = alpha_transport(n, k, t) * size
    value, bits = minimize_over_families(
        graph, size, lambda b: _max_degree_in_bits(graph, b)[1], mode, trials, seed, budget)
    return LemmaCheck("transport-degree", {"n": n, "k": k, "t": t}, size, target, value,
                      graph.family_of(bits), value >= target, mode,
                      {"alpha": alpha_transport(n, k, t)})


def check_mono(n: int, R: SetMask, x: int, mode: str = EXHAUSTIVE, trials: int = 20,
               seed: int = 0, budget: Optional[EnumBudget] = None) -> LemmaCheck:
    """
    Mono-difference comparable pairs in families of size
    binomial(n,⌊n/2⌋)+x.  The (⌊n/2⌋+1)x count is reported, not required.
    """
    size = binomial(n, n // 2) + x
    if x < 0 or size > 1 << n:
        raise ParameterError(f"x={x} out of range for n={n}")
    check = _edge_check("mono", MonoDiffGraph(n, R), size, x,
                        {"n": n, "R": f"{R:#x}", "x": x}, mode, trials, seed, budget)
    conjectured = (n // 2 + 1) * x
    check.extra["conjectured_bound"] = conjectured
    check.extra["conjecture_holds"] = check.observed_min >= conjectured
    return check


def check_claim_cd(n: int, x: int, mode: str = EXHAUSTIVE, trials: int = 20, seed: int = 0,
                   budget: Optional[EnumBudget] = None) -> LemmaCheck:
    """Fewest disjoint pairs among 2^(n-1)+x sets equals the top-layer value."""
    size = (1 << (n - 1)) + x if n else x
    if size < 0 or size > 1 << n:
        raise ParameterError(f"x={x} out of range for n={n}")
    top_value, top_family = top_layer_min_disjoint(n, size)
    check = _edge_check("claim-cd", IntersectionGraph(n, 1), size, top_value,
                        {"n": n, "x": x}, mode, trials, seed, budget)
    check.extra["top_layer_family"] = top_family.to_dict()
    return check


def check_prop64(n: int, N: int, x: int, mode: str = EXHAUSTIVE, trials: int = 20,
                 seed: int = 0, budget: Optional[EnumBudget] = None) -> LemmaCheck:
    """
    Weighted difference-profile value >= x over families of size
    binomial(n,⌊n/2⌋)+x whose members have sizes in [N, n-N].
    """
    if N < 1 or 2 * N > n:
        raise ParameterError(f"need 1 <= N <= n/2, got n={n}, N={N}")
    graph = ComparabilityGraph(n)
    pool = 0
    for m in range(1 << n):
        if N <= m.bit_count() <= n - N:
            pool |= 1 << m
    size = binomial(n, n // 2) + x
    if x < 0 or size > pool.bit_count():
        raise ParameterError(f"x={x} out of range for n={n}, N={N}")
    value, bits = minimize_over_families(
        graph, size,
        lambda b: _profile_of_masks(list(iter_bits(b)), n).weighted_value(N),
        mode, trials, seed, budget, pool)
    witness = graph.family_of(bits)
    return LemmaCheck("prop64", {"n": n, "N": N, "x": x}, size, Fraction(x), value, witness,
                      value >= x, mode, {"profile": difference_profile(witness).to_dict()})


def check_scd_pigeonhole(family: Family, permutations: int = 50, seed: int = 0) -> LemmaCheck:
    """Every random image of the canonical SCD has >= x bad pairs for |F| = middle + x."""
    n = family.ground_n
    x = len(family) - binomial(n, n // 2)
    observed = min_scd_bad_pairs(family, permutations, seed)
    return LemmaCheck("scd-pigeonhole", {"n": n, "permutations": permutations}, len(family),
                      max(x, 0), observed, family, observed >= x, RANDOM)


def scd_pigeonhole_sweep(n: int, permutations: int = 50, seed: int = 0,
                         samples: Optional[int] = None) -> List[LemmaCheck]:
    """
    Pigeonhole checks for every family of at least binomial(n,⌊n/2⌋) sets,
    or ``samples`` seeded random families per size when given.
    """
    check_ground(n)
    middle = binomial(n, n // 2)
    masks = list(range(1 << n))
    rng = np.random.default_rng(seed)
    checks = []
    for size in range(middle, len(masks) + 1):
        if samples is None:
            families = combinations(masks, size)
        else:
            families = (rng.choice(len(masks), size=size, replace=False).tolist()
                        for _ in range(samples))
        for members in families:
            checks.append(check_scd_pigeonhole(Family(n, members), permutations, seed))
    return checks


def tilted_chain_hits(family: Family, p: int, q: int, offset: int, samples: int,
                      seed: int) -> Fraction:
    """Average |family ∩ C_pi| over ``samples`` random orderings."""
    n = family.ground_n
    members = set(family)
    total = 0
    for j in range(samples):
        chain = tilted_chain(n, p, q, offset, sample_permutation(n, seed + j))
        total += sum(1 for c in chain if c in members)
    return Fraction(total, samples)


LEMMAS = ("kleitman", "hamming", "tilt", "transport", "mono", "claim-cd", "prop64")
