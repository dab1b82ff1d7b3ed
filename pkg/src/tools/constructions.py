"""
Constructions — Container Lab
=============================

Explicit families from the set-pair and maximal-independent-set sections:

  - ISP and skew set-pair systems: predicates, the complementary-pair
    extremal family, exhaustive maxima at tiny N and a violation search
  - the ordered skew construction whose subfamilies show that skew systems
    have no supersaturation (``construction_78``)
  - good triples (B, r, s) and the independent sets f(T) of B_{n,k} built by
    rerouting the matching M = {(C, C ∪ {1})} around a 6-cycle
  - matching transversals, the baseline lower bound for mis(B_{n,k})
  - greedy first-fit extension to a maximal independent set

Elements are 1-based; element 1 is bit 0 of a mask.
"""

from __future__ import annotations

import logging
from itertools import combinations, product
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from src.core.budget import EnumBudget
from src.core.errors import ParameterError
from src.core.graphs import BnkGraph, ComparabilityGraph, ImplicitGraph
from src.core.lattice import (
    Family,
    SetMask,
    binomial,
    check_ground,
    check_mask,
    elements_of,
    format_set,
    full_mask,
    iter_bits,
    layer,
)
from src.tools.enumeration import count_maximal_independent_sets, max_independent_set
from src.tools.supersaturation import EXHAUSTIVE, min_edges_over_families

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Set-pair families
# ---------------------------------------------------------------------------

class SetPairFamily:
    """An ordered list of ordered pairs (A, B) of subsets of [N]."""

    __slots__ = ("ground_n", "pairs")

    def __init__(self, ground_n: int, pairs: Iterable[Tuple[SetMask, SetMask]] = ()):
        check_ground(ground_n)
        items = tuple((int(a), int(b)) for a, b in pairs)
        for a, b in items:
            check_mask(a, ground_n)
            check_mask(b, ground_n)
        self.ground_n = ground_n
        self.pairs = items

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Tuple[SetMask, SetMask]]:
        return iter(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetPairFamily):
            return NotImplemented
        return self.ground_n == other.ground_n and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash((self.ground_n, self.pairs))

    def __repr__(self) -> str:
        shown = ", ".join(f"({format_set(a)}, {format_set(b)})" for a, b in self.pairs[:4])
        more = ", ..." if len(self.pairs) > 4 else ""
        return f"SetPairFamily(N={self.ground_n}, [{shown}{more}])"

    def reversed(self) -> "SetPairFamily":
        return SetPairFamily(self.ground_n, self.pairs[::-1])

    def to_dict(self) -> dict:
        return {"N": self.ground_n, "size": str(len(self.pairs)),
                "pairs": [f"{a:x},{b:x}" for a, b in self.pairs]}


def is_isp(family: SetPairFamily, n: int) -> bool:
    """
    (1) A_j ∩ B_j = ∅; (2) A_j ∩ B_k ≠ ∅ for j ≠ k; (3) |A_j| + |B_j| <= n.
    """
    pairs = family.pairs
    for a, b in pairs:
        if a & b or a.bit_count() + b.bit_count() > n:
            return False
    for (a1, b1), (a2, b2) in combinations(pairs, 2):
        if not a1 & b2 or not a2 & b1:
            return False
    return True


def is_skew(family: SetPairFamily, a: int, b: int) -> bool:
    """
    (i) |A_i| <= a and |B_i| <= b; (ii) A_i ∩ B_i = ∅;
    (iii) A_i ∩ B_j ≠ ∅ whenever i < j.
    """
    pairs = family.pairs
    for x, y in pairs:
        if x.bit_count() > a or y.bit_count() > b or x & y:
            return False
    for i, (x, _) in enumerate(pairs):
        for _, y in pairs[i + 1:]:
            if not x & y:
                return False
    return True


def isp_extremal(n: int) -> SetPairFamily:
    """{(A, [n] ∖ A) : |A| = ⌊n/2⌋}, an ISP system of size binomial(n, ⌊n/2⌋)."""
    check_ground(n)
    full = full_mask(n)
    return SetPairFamily(n, [(a, full ^ a) for a in layer(n, n // 2)])


class _IspConflictGraph(ImplicitGraph):
    """
    Pairs (A, B) with A ∩ B = ∅ and |A| + |B| <= n inside P(N); adjacent when
    condition (2) fails between them.  Independent sets are ISP systems.
    """

    kind = "isp_conflict"

    def __init__(self, n: int, N: int):
        check_ground(N)
        pairs = []
        for a in range(1 << N):
            rest = full_mask(N) ^ a
            b = rest
            while True:
                if a.bit_count() + b.bit_count() <= n:
                    pairs.append((a, b))
                if b == 0:
                    break
                b = (b - 1) & rest
        pairs.sort()
        super().__init__(N, tuple(pairs), {p: i for i, p in enumerate(pairs)})
        self.isp_n = n

    def _adjacent(self, u, v):
        return not u[0] & v[1] or not v[0] & u[1]

    def family_of(self, bits: int) -> SetPairFamily:
        return SetPairFamily(self.n, [self._vertices[i] for i in iter_bits(bits)])

    def params(self):
        return {"n": self.isp_n, "N": self.n}


def max_isp_family(n: int, N: int, budget: Optional[EnumBudget] = None
                   ) -> Tuple[int, SetPairFamily]:
    """Largest ISP system with parameters (n, N), by exhaustive search."""
    return max_independent_set(_IspConflictGraph(n, N), budget)


def max_skew_family(N: int, a: int, b: int, budget: Optional[EnumBudget] = None
                    ) -> Tuple[int, SetPairFamily]:
    """
    Longest ordered family of pairs in P(N) x P(N) satisfying (i)-(iii).
    Families are grown by appending, so a new last pair must have a B that
    meets every earlier A.
    """
    check_ground(N)
    budget = budget or EnumBudget()
    candidates = []
    for x in range(1 << N):
        if x.bit_count() > a:
            continue
        for y in range(1 << N):
            if y.bit_count() <= b and not x & y:
                candidates.append((x, y))
    budget.check_vertices(len(candidates), f"max_skew_family(N={N},a={a},b={b})")
    tracker = budget.tracker(f"max_skew_family(N={N},a={a},b={b})")
    best: List[Tuple[int, int]] = []

    def grow(chosen: List[Tuple[int, int]], allowed: List[Tuple[int, int]]) -> None:
        nonlocal best
        tracker.tick(lambda: {"best_size": len(best)})
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) + len(allowed) <= len(best):
            return
        for x, y in allowed:
            rest = [(p, q) for p, q in allowed if q & x]
            grow(chosen + [(x, y)], rest)

    grow([], candidates)
    return len(best), SetPairFamily(N, best)


def isp_violation_search(n: int, N: int, size: int, mode: str = EXHAUSTIVE,
                         trials: int = 20, seed: int = 0,
                         budget: Optional[EnumBudget] = None) -> dict:
    """
    Fewest pairs violating condition (2) among families of ``size`` pairs
    that satisfy (1) and (3).  The open supersaturation bound
    (⌊n/2⌋+1)·x, x = size - binomial(n, ⌊n/2⌋), is reported next to the
    observed minimum and never treated as a requirement.
    """
    graph = _IspConflictGraph(n, N)
    observed, witness = min_edges_over_families(graph, size, mode, trials, seed, budget)
    x = size - binomial(n, n // 2)
    conjectured = (n // 2 + 1) * max(x, 0)
    return {
        "n": n, "N": N, "size": size, "x": x, "mode": mode,
        "observed_min": str(observed),
        "conjectured_bound": str(conjectured),
        "conjecture_holds": observed >= conjectured,
        "witness": witness.to_dict(),
    }


# ---------------------------------------------------------------------------
# The ordered skew construction
# ---------------------------------------------------------------------------

def construction_78_parts(n: int) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]],
                                           List[Tuple[int, int]]]:
    """
    F1 = {(A, {2..n+1} ∖ A) : A ⊆ {2..n}, |A| = n/2},
    F2' = {(A, [n] ∖ A) : A ⊆ {2..n}, |A| = n/2},
    F2'' = {(A, [n] ∖ A) : 1 ∈ A ⊆ [n], |A| = n/2}, each sorted by A.
    """
    if n < 2 or n % 2:
        raise ParameterError(f"construction needs an even n >= 2, got {n}")
    check_ground(n + 1)
    f1_rest = full_mask(n + 1) & ~1
    f1, f2p, f2pp = [], [], []
    for a in layer(n, n // 2):
        if a & 1:
            f2pp.append((a, full_mask(n) ^ a))
        else:
            f1.append((a, f1_rest ^ a))
            f2p.append((a, full_mask(n) ^ a))
    return f1, f2p, f2pp


def construction_78_count(n: int) -> int:
    """2^{m/2} · 3^{m/2}, m = binomial(n, n/2)."""
    f1, _, f2pp = construction_78_parts(n)
    return 2 ** len(f2pp) * 3 ** len(f1)


def construction_78(n: int) -> Iterator[SetPairFamily]:
    """
    Every ordered family made of any subfamily of F2'' and at most one
    member of each bad pair (F1[i], F2'[i]), F1 members first.  Yields
    2^{|F2''|} · 3^{#bad pairs} families lazily.
    """
    f1, f2p, f2pp = construction_78_parts(n)
    for keep_pp in product((False, True), repeat=len(f2pp)):
        tail_pp = [p for p, k in zip(f2pp, keep_pp) if k]
        for picks in product((0, 1, 2), repeat=len(f1)):
            head = [f1[i] for i, c in enumerate(picks) if c == 1]
            tail = [f2p[i] for i, c in enumerate(picks) if c == 2] + tail_pp
            tail.sort()
            yield SetPairFamily(n + 1, head + tail)


# ---------------------------------------------------------------------------
# Good triples
# ---------------------------------------------------------------------------

class GoodTriple(NamedTuple):
    B: SetMask
    r: int
    s: int

    def to_dict(self) -> dict:
        return {"B": format_set(self.B), "r": self.r, "s": self.s}

    def __str__(self) -> str:
        return f"({format_set(self.B)}, {self.r}, {self.s})"


def _check_bnk(n: int, k: int) -> None:
    check_ground(n)
    if not 1 <= k <= n - 2:
        raise ParameterError(f"need 1 <= k <= n-2, got n={n}, k={k}")


def check_good_triple(T: GoodTriple, n: int, k: int) -> None:
    """1 ∉ B, r ∉ B, r ≠ 1, s ∈ B, |B| = k."""
    B, r, s = T
    check_mask(B, n)
    if B.bit_count() != k:
        raise ParameterError(f"{T}: |B| must be {k}")
    if not (1 <= r <= n and 1 <= s <= n):
        raise ParameterError(f"{T}: r and s must lie in [{n}]")
    if B & 1 or B >> (r - 1) & 1 or r == 1 or not B >> (s - 1) & 1:
        raise ParameterError(f"{T} is not a good triple")


def is_good_triple(T: GoodTriple, n: int, k: int) -> bool:
    try:
        check_good_triple(T, n, k)
    except ParameterError:
        return False
    return True


def good_triples(n: int, k: int) -> Iterator[GoodTriple]:
    """All good triples: B ascending, then r, then s."""
    _check_bnk(n, k)
    for B in layer(n, k):
        if B & 1:
            continue
        for r in range(2, n + 1):
            if B >> (r - 1) & 1:
                continue
            for s in elements_of(B):
                yield GoodTriple(B, r, s)


def good_triple_count(n: int, k: int) -> int:
    """binomial(n-1, k) · k · (n-k-1)."""
    _check_bnk(n, k)
    return binomial(n - 1, k) * k * (n - k - 1)


def good_triple_partner(T: GoodTriple) -> GoodTriple:
    """T' = (B ∪ {r} ∖ {s}, s, r): the other triple producing the same sets."""
    B, r, s = T
    return GoodTriple((B | 1 << (r - 1)) & ~(1 << (s - 1)), s, r)


def matching_edges(n: int, k: int, i: int = 1) -> List[Tuple[SetMask, SetMask]]:
    """M_i = {(C, C ∪ {i}) : i ∉ C, |C| = k}, ordered by C."""
    check_ground(n)
    if not 1 <= i <= n:
        raise ParameterError(f"element must be in [{n}], got {i}")
    bit = 1 << (i - 1)
    return [(c, c | bit) for c in layer(n, k) if not c & bit]


class _TripleShape(NamedTuple):
    top: SetMask        # B ∪ {r}
    bottom: SetMask     # B ∪ {1} ∖ {s}
    down: frozenset     # D(T): k-subsets of B ∪ {r}
    up: frozenset       # U(T): (k+1)-supersets of B ∪ {1} ∖ {s}


def _shape(T: GoodTriple, n: int, k: int) -> _TripleShape:
    check_good_triple(T, n, k)
    B, r, s = T
    top = B | 1 << (r - 1)
    bottom = (B | 1) & ~(1 << (s - 1))
    down = frozenset(top & ~(1 << e) for e in iter_bits(top))
    up = frozenset(bottom | 1 << e for e in range(n) if not bottom >> e & 1)
    return _TripleShape(top, bottom, down, up)


def triple_footprint(T: GoodTriple, n: int, k: int) -> frozenset:
    """B^r, B^1_s and both endpoints of every matching edge that D(T) ∪ U(T) touches."""
    shape = _shape(T, n, k)
    touched = shape.down | shape.up
    out = {shape.top, shape.bottom}
    for c, c1 in matching_edges(n, k):
        if c in touched or c1 in touched:
            out.update((c, c1))
    return frozenset(out)


def _footprint_distance(x: frozenset, y: frozenset) -> int:
    return min((a ^ b).bit_count() for a in x for b in y)


def free_edges(triples: Sequence[GoodTriple], n: int, k: int) -> List[Tuple[SetMask, SetMask]]:
    """Edges of M touched by no D(T) ∪ U(T)."""
    touched = set()
    for T in triples:
        shape = _shape(T, n, k)
        touched |= shape.down | shape.up
    return [(c, c1) for c, c1 in matching_edges(n, k)
            if c not in touched and c1 not in touched]


def construct_multi_fT(triples: Sequence[GoodTriple], n: int, k: int,
                       choices: Sequence[int]) -> Family:
    """
    One independent set of B_{n,k} for a collection of good triples with
    pairwise disjoint footprints: B^r and B^1_s of every triple; on a matching
    edge touched once by some D(T) ∪ U(T), the untouched end; on edges
    touched twice (e and f), neither end; on free edges, the lower end when
    the matching choice is 0 and the upper end when it is 1.

    Raises:
        ParameterError: a triple is not good, footprints overlap, or
            ``choices`` does not cover the free edges exactly.
        NotIndependentError: the result has an edge (never for valid input).
    """
    _check_bnk(n, k)
    shapes = [_shape(T, n, k) for T in triples]
    prints = [triple_footprint(T, n, k) for T in triples]
    for (i, a), (j, b) in combinations(enumerate(prints), 2):
        if a & b:
            raise ParameterError(f"triples {triples[i]} and {triples[j]} have overlapping footprints")
    free = free_edges(triples, n, k)
    if len(choices) != len(free):
        raise ParameterError(f"expected {len(free)} choices, got {len(choices)}")

    chosen = set()
    touched = set()
    for shape in shapes:
        chosen.update((shape.top, shape.bottom))
        touched |= shape.down | shape.up
    for c, c1 in matching_edges(n, k):
        hit_low, hit_high = c in touched, c1 in touched
        if hit_low and not hit_high:
            chosen.add(c1)
        elif hit_high and not hit_low:
            chosen.add(c)
    for (c, c1), pick in zip(free, choices):
        chosen.add(c1 if pick else c)

    family = Family(n, chosen)
    BnkGraph(n, k).require_independent(family)
    return family


def construct_fT(T: GoodTriple, n: int, k: int, choices: Sequence[int]) -> Family:
    """The member of f(T) selected by ``choices`` over the free edges of M."""
    return construct_multi_fT([T], n, k, choices)


def iter_fT(T: GoodTriple, n: int, k: int) -> Iterator[Family]:
    """All 2^{binomial(n-1,k)-n+1} members of f(T)."""
    width = len(free_edges([T], n, k))
    for choices in product((0, 1), repeat=width):
        yield construct_fT(T, n, k, choices)


def fT_size(n: int, k: int) -> int:
    """|f(T)| = 2^{binomial(n-1,k) - n + 1}."""
    _check_bnk(n, k)
    return 1 << (binomial(n - 1, k) - n + 1)


def compatible_triples(n: int, k: int, count: int, radius: int = 1) -> List[GoodTriple]:
    """
    Greedily pick up to ``count`` good triples (canonical order) whose
    footprints lie at pairwise Hamming distance >= ``radius``.  Radius 1
    means disjoint footprints, which is all ``construct_multi_fT`` needs.
    """
    if radius < 1:
        raise ParameterError(f"radius must be >= 1, got {radius}")
    picked: List[GoodTriple] = []
    prints: List[frozenset] = []
    for T in good_triples(n, k):
        if len(picked) >= count:
            break
        fp = triple_footprint(T, n, k)
        if all(_footprint_distance(fp, other) >= radius for other in prints):
            picked.append(T)
            prints.append(fp)
    if len(picked) < count:
        log.warning("only %d of %d compatible triples exist at radius %d for n=%d, k=%d",
                    len(picked), count, radius, n, k)
    return picked


# ---------------------------------------------------------------------------
# Matching transversals and maximal extensions
# ---------------------------------------------------------------------------

def matching_lower_bound(n: int, k: int, i: int = 1) -> Iterator[Family]:
    """
    Every transversal of M_i (one end of each edge, lower end for 0 in the
    binary counter), 2^{binomial(n-1,k)} families in all.
    """
    check_ground(n)
    if not 1 <= k <= n - 1:
        raise ParameterError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    edges = matching_edges(n, k, i)
    for picks in product((0, 1), repeat=len(edges)):
        yield Family(n, [hi if p else lo for (lo, hi), p in zip(edges, picks)])


def extend_to_maximal(graph: ImplicitGraph, independent: Iterable) -> Family:
    """
    First-fit in canonical vertex order: add every vertex with no neighbour
    in the growing set.

    Raises:
        NotIndependentError: ``independent`` has an edge.
    """
    independent = list(independent)
    graph.require_independent(independent)
    bits = graph.bits_of(independent)
    blocked = bits
    for i in iter_bits(bits):
        blocked |= graph.neighbor_bits(i)
    for i in range(graph.num_vertices):
        if not blocked >> i & 1:
            bits |= 1 << i
            blocked |= (1 << i) | graph.neighbor_bits(i)
    return graph.family_of(bits)


def triple_provenance(n: int, k: int, extend: bool = True) -> Dict[Family, List[GoodTriple]]:
    """
    Map every set built from a good triple (optionally extended to a maximal
    independent set) to the triples that produce it.
    """
    graph = BnkGraph(n, k)
    origin: Dict[Family, List[GoodTriple]] = {}
    for T in good_triples(n, k):
        for fam in iter_fT(T, n, k):
            key = extend_to_maximal(graph, fam) if extend else fam
            origin.setdefault(key, []).append(T)
    return origin


def count_maximal_antichains(n: int, budget: Optional[EnumBudget] = None) -> int:
    """ma(P(n)) = mis(comparability(n))."""
    return count_maximal_independent_sets(ComparabilityGraph(n), budget)
