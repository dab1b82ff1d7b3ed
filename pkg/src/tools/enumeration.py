"""
Enumeration Oracles — Container Lab
===================================

Exact brute-force oracles over implicit graphs:

  - ``count_independent_sets``   branching count(G) = count(G−v) + count(G−N[v])
                                 on a max-degree vertex, with connected-component
                                 factorisation and memoisation on the vertex set
  - ``max_independent_set``      branch and bound with degree<=1 reductions and a
                                 greedy clique-cover bound
  - ``enumerate_maximal_independent_sets``
                                 Bron–Kerbosch on the complement (pivoted when only
                                 counting, canonical order when streaming)

plus direct 2^|V| scans and a networkx cross-check used to validate them.
All vertex sets are Python-int bitsets over canonical vertex indices;
``within`` restricts an oracle to an induced subgraph.
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from src.core.budget import BudgetTracker, EnumBudget
from src.core.errors import BudgetExceeded, ParameterError
from src.core.graphs import ImplicitGraph, MonoDiffGraph, iter_independent_sets
from src.core.lattice import Family, check_ground, iter_bits

log = logging.getLogger(__name__)

_MEMO_CAP = 1 << 18
_BRUTEFORCE_LIMIT = 20


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _prepare(graph: ImplicitGraph, within: Optional[int], budget: Optional[EnumBudget],
             label: str) -> Tuple[int, Dict[int, int], BudgetTracker]:
    budget = budget or EnumBudget()
    pool = graph.all_bits if within is None else within
    budget.check_vertices(pool.bit_count(), f"{label}({graph.spec()})")
    nb = {v: graph.neighbor_bits(v) & pool for v in iter_bits(pool)}
    return pool, nb, budget.tracker(f"{label}({graph.spec()})")


def _component(P: int, nb: Dict[int, int]) -> int:
    comp = frontier = P & -P
    while frontier:
        reach = 0
        for v in iter_bits(frontier):
            reach |= nb[v]
        frontier = reach & P & ~comp
        comp |= frontier
    return comp


def _max_degree_vertex(P: int, nb: Dict[int, int]) -> Tuple[int, int]:
    best_v, best_d = -1, -1
    for v in iter_bits(P):
        d = (nb[v] & P).bit_count()
        if d > best_d:
            best_v, best_d = v, d
    return best_v, best_d


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def count_independent_sets(graph: ImplicitGraph, budget: Optional[EnumBudget] = None,
                           within: Optional[int] = None) -> int:
    """
    Exact number of independent sets, ∅ included.

    Raises:
        BudgetExceeded: ``partial`` holds the number of memoised subproblems.
    """
    pool, nb, tracker = _prepare(graph, within, budget, "count_independent_sets")
    memo: Dict[int, int] = {}

    def count(P: int) -> int:
        if P == 0:
            return 1
        hit = memo.get(P)
        if hit is not None:
            return hit
        tracker.tick(lambda: {"memoised_subproblems": len(memo)})
        comp = _component(P, nb)
        if comp != P:
            result = count(comp) * count(P & ~comp)
        else:
            v, d = _max_degree_vertex(P, nb)
            rest = P & ~(1 << v)
            if d == 0:
                result = 2 * count(rest)
            else:
                result = count(rest) + count(rest & ~nb[v])
        if len(memo) < _MEMO_CAP:
            memo[P] = result
        return result

    total = count(pool)
    log.debug("%s: %d independent sets after %d nodes", graph.spec(), total, tracker.nodes)
    return total


def count_independent_sets_bruteforce(graph: ImplicitGraph,
                                      within: Optional[int] = None) -> int:
    """Direct scan over all 2^|V| vertex subsets (|V| <= 20)."""
    pool = graph.all_bits if within is None else within
    members = list(iter_bits(pool))
    if len(members) > _BRUTEFORCE_LIMIT:
        raise BudgetExceeded(
            f"subset scan of {graph.spec()} needs |V| <= {_BRUTEFORCE_LIMIT}, got {len(members)}")
    nb = [graph.neighbor_bits(v) for v in members]
    local = []
    for i, v in enumerate(members):
        bits = 0
        for j, w in enumerate(members):
            if nb[i] >> w & 1:
                bits |= 1 << j
        local.append(bits)
    total = 0
    for subset in range(1 << len(members)):
        s = subset
        ok = True
        while s:
            low = s & -s
            if local[low.bit_length() - 1] & subset:
                ok = False
                break
            s ^= low
        total += ok
    return total


def count_antichains_direct(n: int) -> int:
    """Antichains of P(n) by checking every family of subsets (n <= 3)."""
    check_ground(n)
    if n > 3:
        raise BudgetExceeded(f"direct antichain scan needs n <= 3, got {n}")
    sets = list(range(1 << n))
    total = 0
    for fam in range(1 << len(sets)):
        members = [s for s in sets if fam >> s & 1]
        if all(not ((a & b) == a or (a & b) == b) for a, b in combinations(members, 2)):
            total += 1
    return total


def count_two_coloured_sperner(n: int) -> int:
    """
    Families F ⊆ P(n) for which SOME colouring R leaves no comparable pair
    of F with monochromatic difference (n <= 3).
    """
    check_ground(n)
    if n > 3:
        raise BudgetExceeded(f"two-coloured scan needs n <= 3, got {n}")
    graphs = [MonoDiffGraph(n, r) for r in range(1 << n)]
    tables = [g.neighbor_table() for g in graphs]
    total = 0
    for fam in range(1 << (1 << n)):
        for table in tables:
            if all(not table[v] & fam for v in iter_bits(fam)):
                total += 1
                break
    return total


# ---------------------------------------------------------------------------
# Maximum independent set
# ---------------------------------------------------------------------------

def _clique_cover_size(P: int, nb: Dict[int, int]) -> int:
    cliques: List[int] = []
    for v in iter_bits(P):
        for idx, c in enumerate(cliques):
            if not c & ~nb[v]:
                cliques[idx] = c | (1 << v)
                break
        else:
            cliques.append(1 << v)
    return len(cliques)


def _greedy_independent(P: int, nb: Dict[int, int]) -> int:
    chosen = 0
    while P:
        best_v, best_d = -1, None
        for v in iter_bits(P):
            d = (nb[v] & P).bit_count()
            if best_d is None or d < best_d:
                best_v, best_d = v, d
        chosen |= 1 << best_v
        P &= ~(nb[best_v] | (1 << best_v))
    return chosen


def max_independent_set(graph: ImplicitGraph, budget: Optional[EnumBudget] = None,
                        within: Optional[int] = None) -> Tuple[int, Family]:
    """
    Exact maximum independent set size and a witness.

    Raises:
        BudgetExceeded: ``partial`` holds the best size found so far.
    """
    pool, nb, tracker = _prepare(graph, within, budget, "max_independent_set")
    best_bits = _greedy_independent(pool, nb)
    best = [best_bits.bit_count(), best_bits]

    def search(P: int, size: int, current: int) -> None:
        tracker.tick(lambda: {"best_size": best[0]})
        reduced = True
        while reduced and P:
            reduced = False
            for v in iter_bits(P):
                if (nb[v] & P).bit_count() <= 1:
                    current |= 1 << v
                    size += 1
                    P &= ~(nb[v] | (1 << v))
                    reduced = True
                    break
        if not P:
            if size > best[0]:
                best[0], best[1] = size, current
            return
        if size + _clique_cover_size(P, nb) <= best[0]:
            return
        v, _ = _max_degree_vertex(P, nb)
        search(P & ~(nb[v] | (1 << v)), size + 1, current | (1 << v))
        search(P & ~(1 << v), size, current)

    search(pool, 0, 0)
    log.debug("%s: maximum independent set %d after %d nodes",
              graph.spec(), best[0], tracker.nodes)
    return best[0], graph.family_of(best[1])


# ---------------------------------------------------------------------------
# Maximal independent sets
# ---------------------------------------------------------------------------

def _non_neighbours(pool: int, nb: Dict[int, int]) -> Dict[int, int]:
    return {v: pool & ~nb[v] & ~(1 << v) for v in iter_bits(pool)}


def count_maximal_independent_sets(graph: ImplicitGraph, budget: Optional[EnumBudget] = None,
                                   within: Optional[int] = None) -> int:
    """mis(G) by pivoted Bron–Kerbosch on the complement graph."""
    pool, nb, tracker = _prepare(graph, within, budget, "count_maximal_independent_sets")
    nc = _non_neighbours(pool, nb)
    found = [0]

    def expand(P: int, X: int) -> None:
        tracker.tick(lambda: {"found": found[0]})
        if not P:
            if not X:
                found[0] += 1
            return
        pivot, pivot_hits = -1, -1
        for u in iter_bits(P | X):
            hits = (P & nc[u]).bit_count()
            if hits > pivot_hits:
                pivot, pivot_hits = u, hits
        for v in iter_bits(P & ~nc[pivot]):
            expand(P & nc[v], X & nc[v])
            P &= ~(1 << v)
            X |= 1 << v

    expand(pool, 0)
    return found[0]


def iter_maximal_independent_sets(graph: ImplicitGraph, budget: Optional[EnumBudget] = None,
                                  within: Optional[int] = None) -> Iterator[int]:
    """
    Maximal independent sets as index bitsets, lexicographic in sorted
    indices.  A branch is cut as soon as an excluded earlier vertex could
    still be added to every completion.
    """
    pool, nb, tracker = _prepare(graph, within, budget, "iter_maximal_independent_sets")
    nc = _non_neighbours(pool, nb)

    def expand(R: int, P: int, X: int) -> Iterator[int]:
        tracker.tick()
        if not P:
            if not X:
                yield R
            return
        for x in iter_bits(X):
            if not P & ~nc[x]:
                return
        for v in iter_bits(P):
            yield from expand(R | (1 << v), P & nc[v], X & nc[v])
            P &= ~(1 << v)
            X |= 1 << v

    yield from expand(0, pool, 0)


def enumerate_maximal_independent_sets(graph: ImplicitGraph,
                                       budget: Optional[EnumBudget] = None,
                                       stream: bool = False,
                                       within: Optional[int] = None
                                       ) -> Tuple[int, Optional[List[Family]]]:
    """
    mis(G) and, when ``stream`` is set, the maximal independent sets in
    canonical order.
    """
    if not stream:
        return count_maximal_independent_sets(graph, budget, within), None
    sets = [graph.family_of(b) for b in iter_maximal_independent_sets(graph, budget, within)]
    return len(sets), sets


def is_maximal_independent(graph: ImplicitGraph, bits: int,
                           within: Optional[int] = None) -> bool:
    pool = graph.all_bits if within is None else within
    covered = bits
    for v in iter_bits(bits):
        if graph.neighbor_bits(v) & bits:
            return False
        covered |= graph.neighbor_bits(v)
    return not pool & ~covered


def count_maximal_via_networkx(graph: ImplicitGraph) -> int:
    """mis(G) as the number of maximal cliques of the complement, via networkx."""
    import networkx as nx

    if graph.num_vertices == 0:
        return 1
    complement = nx.complement(graph.to_networkx())
    return sum(1 for _ in nx.find_cliques(complement))


# ---------------------------------------------------------------------------
# Independent-set listing
# ---------------------------------------------------------------------------

def list_independent_sets(graph: ImplicitGraph, budget: Optional[EnumBudget] = None,
                          within: Optional[int] = None) -> List[int]:
    budget = budget or EnumBudget()
    pool = graph.all_bits if within is None else within
    budget.check_vertices(pool.bit_count(), f"list_independent_sets({graph.spec()})")
    tracker = budget.tracker(f"list_independent_sets({graph.spec()})")
    return list(iter_independent_sets(graph, pool, tracker))


def check_oracle_consistency(graph: ImplicitGraph,
                             budget: Optional[EnumBudget] = None) -> Dict[str, int]:
    """Branching count against the direct subset scan (|V| <= 20)."""
    if graph.num_vertices > _BRUTEFORCE_LIMIT:
        raise ParameterError(f"{graph.spec()} is too large for the subset scan")
    return {
        "branching": count_independent_sets(graph, budget),
        "subset_scan": count_independent_sets_bruteforce(graph),
    }
