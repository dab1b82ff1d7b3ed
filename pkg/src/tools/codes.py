"""
Codes — Container Lab
=====================

Code-theoretic quantities for set systems viewed as binary strings:

  - Hamming balls, V(n,t), the Hamming bound H(n,t) = 2^n / V(n,t)
  - code and perfect-code predicates, the repetition and [7,4] Hamming codes
  - ball-intersection sizes W(t,d) by brute force
  - the disjoint-pair space, pair balls P((A,B),u), the transportation bound
    H(n,k,d), and the supersaturation rates alpha

Every bound is an exact ``Fraction``; comparisons with counts never round.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from src.core.budget import EnumBudget
from src.core.containers import Schedule
from src.core.errors import ParameterError
from src.core.graphs import HammingGraph, TransportGraph, pair_space, transport_distance
from src.core.lattice import (
    DisjointPair,
    Family,
    SetMask,
    binomial,
    check_ground,
    check_mask,
    full_mask,
    popcount_array,
)
from src.tools.enumeration import count_independent_sets, max_independent_set


# ---------------------------------------------------------------------------
# Hamming balls and bounds
# ---------------------------------------------------------------------------

def ball_volume(n: int, t: int) -> int:
    """V(n,t) = sum_{k<=t} binomial(n,k)."""
    return sum(binomial(n, k) for k in range(0, min(t, n) + 1))


def hamming_bound(n: int, t: int) -> Fraction:
    """H(n,t) = 2^n / V(n,t)."""
    if t < 0:
        raise ParameterError(f"t must be >= 0, got {t}")
    return Fraction(1 << n, ball_volume(n, t))


def _flip_masks(n: int, r: int) -> List[int]:
    return [sum(1 << i for i in c) for k in range(r + 1) for c in combinations(range(n), k)]


def ball(center: SetMask, r: int, n: int) -> Family:
    """All subsets of [n] within Hamming distance r of ``center``."""
    check_ground(n)
    check_mask(center, n)
    if r < 0 or r > n:
        raise ParameterError(f"radius must be in [0, {n}], got {r}")
    return Family(n, [center ^ f for f in _flip_masks(n, r)])


def is_code(family: Family, d: int) -> bool:
    """Pairwise Hamming distance at least d."""
    members = list(family)
    return all((a ^ b).bit_count() >= d for a, b in combinations(members, 2))


def is_perfect(family: Family, t: int) -> bool:
    """
    A t-error-correcting code of size H(n,t) whose radius-t balls partition
    P(n).
    """
    n = family.ground_n
    if not is_code(family, 2 * t + 1):
        return False
    if Fraction(len(family)) != hamming_bound(n, t):
        return False
    cover = np.zeros(1 << n, dtype=np.int64)
    flips = np.array(_flip_masks(n, t), dtype=np.int64)
    for m in family:
        np.add.at(cover, np.bitwise_xor(flips, m), 1)
    return bool((cover == 1).all())


def repetition_code(n: int) -> Family:
    """{∅, [n]}: perfect with t = (n-1)/2 for odd n."""
    check_ground(n)
    return Family(n, [0, full_mask(n)])


def hamming_7_4_code() -> Family:
    """
    The 16 codewords of the [7,4] Hamming code.  Data bits sit at positions
    3, 5, 6, 7; parity bits at positions 1, 2, 4 (position i is bit i-1).
    """
    data_positions = (3, 5, 6, 7)
    parity_groups = {1: (3, 5, 7), 2: (3, 6, 7), 4: (5, 6, 7)}
    words = []
    for data in range(16):
        bits = {pos: (data >> i) & 1 for i, pos in enumerate(data_positions)}
        for p, group in parity_groups.items():
            bits[p] = sum(bits[g] for g in group) % 2
        words.append(sum(1 << (pos - 1) for pos, b in bits.items() if b))
    return Family(7, words)


def ball_intersection_size(n: int, t: int, d: int) -> int:
    """W(t,d): |B(X,t) ∩ B(Y,t)| for centres at distance d (brute force)."""
    check_ground(n)
    if not 0 <= d <= n:
        raise ParameterError(f"distance must be in [0, {n}], got {d}")
    other = (1 << d) - 1
    xs = np.arange(1 << n, dtype=np.uint64)
    near_zero = popcount_array(xs) <= t
    near_other = popcount_array(xs ^ np.uint64(other)) <= t
    return int((near_zero & near_other).sum())


def ball_overlap_formula(n: int, t: int) -> int:
    """W(t,1) = 2 V(n-1, t-1)."""
    if t < 1:
        return 0
    return 2 * ball_volume(n - 1, t - 1)


def alpha(n: int, t: int) -> Fraction:
    """n / (10 t H(n,t))."""
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    return Fraction(n, 10 * t) / hamming_bound(n, t)


def hamming_schedule(n: int, t: int, delta_large, delta_small) -> Schedule:
    """Two-stage schedule switching once fewer than 2⌈H(n,t)⌉ vertices remain."""
    return Schedule.two_stage(2 * math.ceil(hamming_bound(n, t)), delta_large, delta_small)


# ---------------------------------------------------------------------------
# Code search through the oracles
# ---------------------------------------------------------------------------

def max_code(n: int, t: int, budget: Optional[EnumBudget] = None) -> Tuple[int, Family]:
    """Largest t-error-correcting code in P(n)."""
    return max_independent_set(HammingGraph(n, t), budget)


def count_codes(n: int, t: int, budget: Optional[EnumBudget] = None) -> int:
    return count_independent_sets(HammingGraph(n, t), budget)


# ---------------------------------------------------------------------------
# Disjoint pairs and transportation codes
# ---------------------------------------------------------------------------

def _check_transport(n: int, k: int) -> None:
    check_ground(n)
    if k < 1 or 2 * k > n:
        raise ParameterError(f"need 1 <= k and 2k <= n, got n={n}, k={k}")


def transport_bound(n: int, k: int, d: int) -> Fraction:
    """
    H(n,k,d) = (1/2) · n(n-1)···(n-2k+d) / ([k···⌈(d+1)/2⌉] · [k···⌊(d+1)/2⌋]).
    """
    _check_transport(n, k)
    if not 1 <= d <= 2 * k:
        raise ParameterError(f"need 1 <= d <= 2k, got d={d}, k={k}")
    top = math.prod(range(n - 2 * k + d, n + 1))
    left = math.prod(range((d + 2) // 2, k + 1))
    right = math.prod(range((d + 1) // 2, k + 1))
    return Fraction(top, 2 * left * right)


def z_space_size(n: int, u: int) -> Fraction:
    """|Z(u)| = (1/2) binomial(n,u) binomial(n-u,u)."""
    return Fraction(binomial(n, u) * binomial(n - u, u), 2)


def pair_ball(x: DisjointPair, u: int) -> List[Tuple[SetMask, SetMask]]:
    """
    Unordered pairs (U, V), |U| = |V| = u, with U ⊆ A and V ⊆ B (or the
    reverse), as canonical tuples (smaller mask first), sorted.
    """
    a, b = x.first, x.second
    k = a.bit_count()
    if u < 0 or u > k:
        raise ParameterError(f"need 0 <= u <= k = {k}, got {u}")
    subs_a = _submasks_of_size(a, u)
    subs_b = _submasks_of_size(b, u)
    out = {(min(s, t), max(s, t)) for s in subs_a for t in subs_b}
    return sorted(out)


def _submasks_of_size(mask: SetMask, size: int) -> List[SetMask]:
    positions = [i for i in range(mask.bit_length()) if mask >> i & 1]
    return [sum(1 << i for i in c) for c in combinations(positions, size)]


def pair_balls_intersect(x: DisjointPair, y: DisjointPair, u: int) -> bool:
    return bool(set(pair_ball(x, u)) & set(pair_ball(y, u)))


def pair_ball_overlap_formula(k: int, t: int) -> Fraction:
    """W(k-t,1) = binomial(k,k-t)^2 · binomial(k-1,t-1) / binomial(k,t)."""
    return Fraction(binomial(k, k - t) ** 2 * binomial(k - 1, t - 1), binomial(k, t))


def max_pair_ball_intersection(n: int, k: int, t: int,
                               distance: Optional[int] = None) -> int:
    """
    Largest |P(x,k-t) ∩ P(y,k-t)| over distinct x, y in Y(n,k), optionally
    only over pairs at a given transportation distance.
    """
    _check_transport(n, k)
    if not 1 <= t <= k:
        raise ParameterError(f"need 1 <= t <= k, got t={t}, k={k}")
    space = pair_space(n, k)
    balls = [set(pair_ball(x, k - t)) for x in space]
    best = 0
    for i, j in combinations(range(len(space)), 2):
        if distance is not None and transport_distance(space[i], space[j]) != distance:
            continue
        best = max(best, len(balls[i] & balls[j]))
    return best


def is_transport_code(family: Family, d: int) -> bool:
    """Pairwise transportation distance at least d."""
    members = list(family)
    return all(transport_distance(x, y) >= d for x, y in combinations(members, 2))


def alpha_transport(n: int, k: int, t: int) -> Fraction:
    """k / (10 t H(n,k,2t+1))."""
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    return Fraction(k, 10 * t) / transport_bound(n, k, 2 * t + 1)


def max_transport_code(n: int, k: int, t: int,
                       budget: Optional[EnumBudget] = None) -> Tuple[int, Family]:
    """C(n,k,2t+1): the largest 2-(n,k,2t+1)-code."""
    return max_independent_set(TransportGraph(n, k, t), budget)


def pair_ball_implies_close(n: int, k: int, t: int) -> List[Tuple[DisjointPair, DisjointPair]]:
    """
    Pairs whose radius-(k-t) pair balls intersect but whose distance
    exceeds 2t.  Empty when the implication holds.
    """
    _check_transport(n, k)
    space = pair_space(n, k)
    balls = [set(pair_ball(x, k - t)) for x in space]
    bad = []
    for i, j in combinations(range(len(space)), 2):
        if balls[i] & balls[j] and transport_distance(space[i], space[j]) > 2 * t:
            bad.append((space[i], space[j]))
    return bad
