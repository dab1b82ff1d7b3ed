"""
Random Katona — Container Lab
=============================

t-intersecting families in the Boolean lattice and in its random
sublattice P(n, p), where every set is kept independently with
probability p.

  katona_K            Katona's maximum K(n, t)
  sample_lattice      a seeded draw of P(n, p)
  max_t_intersecting  the exact maximum inside a family (oracle)
  build_A_ex          all sets of size >= (n+t)/2
  build_A_lower       the lower-window family that beats 1/2 in P(n, p)
  monte_carlo_katona  per-trial exact maxima and their ratio to p·2^n

Every threshold that involves n/4, t/2 or a·sqrt(n) is decided with exact
rational comparisons.  Large families (tens of millions of sets at n = 25)
are kept as numpy arrays and checked with a subset-closure transform
instead of pairwise loops.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from src.core.budget import EnumBudget
from src.core.errors import ParameterError
from src.core.graphs import IntersectionGraph
from src.core.lattice import (
    Family,
    binom_at_least,
    binomial,
    check_ground,
    full_mask,
    iter_mask_chunks,
    popcount_array,
    select_masks,
)
from src.core.utils import format_fraction, parse_fraction, rational_to_dict
from src.tools.enumeration import max_independent_set

log = logging.getLogger(__name__)

# Largest ground set for which the 2^n closure table is built.
CLOSURE_MAX_N = 26
# Families up to this size are checked pairwise.
PAIRWISE_LIMIT = 4096
_CHUNK = 1 << 20

ASYMPTOTIC_NOTE = (
    "for t = o(sqrt n) and p above 2^-n, the largest t-intersecting family in "
    "P(n,p) has size (1/2 + o(1))·p·2^n; for p = 2^-Omega(sqrt(n) log n) it is at "
    "least (1/2 + eps)·p·2^n.  Finite-n ratios are calibration data, not a check "
    "of either statement.")


# ---------------------------------------------------------------------------
# Katona's theorem
# ---------------------------------------------------------------------------

def _check_t(n: int, t: int) -> None:
    check_ground(n)
    if not 1 <= t <= n:
        raise ParameterError(f"need 1 <= t <= n, got n={n}, t={t}")


def katona_K(n: int, t: int) -> int:
    """
    K(n,t): binom_at_least(n,(n+t)/2) when n+t is even,
    2·binom_at_least(n-1,(n+t-1)/2) when it is odd.
    """
    _check_t(n, t)
    if (n + t) % 2 == 0:
        return binom_at_least(n, (n + t) // 2)
    return 2 * binom_at_least(n - 1, (n + t - 1) // 2)


def build_A_ex(n: int, t: int) -> Family:
    """All subsets of [n] of size at least (n+t)/2."""
    _check_t(n, t)
    return Family.from_sorted_array(n, select_masks(n, lambda m, s: 2 * s >= n + t))


def build_katona_extremal(n: int, t: int) -> Family:
    """
    A t-intersecting family of size K(n,t).  For odd n+t the sets of size
    (n+t+1)/2 and above are joined by the (n+t-1)/2-sets that avoid n.
    """
    _check_t(n, t)
    if (n + t) % 2 == 0:
        return build_A_ex(n, t)
    s = (n + t - 1) // 2
    top = np.uint64(1 << (n - 1))

    def keep(masks, sizes):
        return (sizes >= s + 1) | ((sizes == s) & ((masks & top) == 0))

    return Family.from_sorted_array(n, select_masks(n, keep))


# ---------------------------------------------------------------------------
# The lower-window family
# ---------------------------------------------------------------------------

def lower_window(n: int, a) -> List[int]:
    """
    Set sizes s with n/2 - a·sqrt(n)/2 <= s <= n/2 - a·sqrt(n)/4, decided by
    comparing squares so sqrt(n) never has to be evaluated.
    """
    check_ground(n)
    a = parse_fraction(a, "a")
    if a <= 0:
        raise ParameterError(f"a must be positive, got {format_fraction(a)}")
    a2n = a * a * n
    sizes = []
    for s in range(n + 1):
        d = Fraction(n, 2) - s
        fits_below = d <= 0 or 4 * d * d <= a2n
        fits_above = d > 0 and 16 * d * d >= a2n
        if fits_below and fits_above:
            sizes.append(s)
    return sizes


def build_A_lower(n: int, t: int, a) -> Family:
    """
    Sets A in the lower window with |A ∩ H| >= n/4 + t/2, H the first ⌊n/2⌋
    elements.  Any two members meet inside H in at least
    2⌈(n+2t)/4⌉ - ⌊n/2⌋ >= t elements.

    An empty window is logged and yields the empty family.
    """
    _check_t(n, t)
    window = lower_window(n, a)
    if not window:
        log.warning("lower window is empty for n=%d, a=%s", n, format_fraction(parse_fraction(a)))
        return Family(n)
    half = np.uint64((1 << (n // 2)) - 1)
    wanted = np.array(window, dtype=np.int64)

    def keep(masks, sizes):
        in_half = popcount_array(masks & half)
        return np.isin(sizes, wanted) & (4 * in_half >= n + 2 * t)

    return Family.from_sorted_array(n, select_masks(n, keep))


# ---------------------------------------------------------------------------
# t-intersection checks
# ---------------------------------------------------------------------------

def _subset_closure(n: int, members: np.ndarray) -> np.ndarray:
    """closure[X] is true when some member is a subset of X."""
    closure = np.zeros(1 << n, dtype=bool)
    closure[members.astype(np.int64)] = True
    for i in range(n):
        view = closure.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return closure


def _meets_closure_weakly(n: int, t: int, queries: np.ndarray,
                          closure: np.ndarray) -> np.ndarray:
    """
    For each query Q with |Q| >= t: is there a member B of the closed family
    with |B ∩ Q| < t?  Equivalent to B ⊆ ([n] ∖ Q) ∪ T for some (t-1)-subset
    T of Q.
    """
    full = np.uint64(full_mask(n))
    hit = np.zeros(len(queries), dtype=bool)
    for start in range(0, len(queries), _CHUNK):
        block = queries[start:start + _CHUNK]
        outside = block ^ full
        block_hit = np.zeros(len(block), dtype=bool)
        for T in combinations(range(n), t - 1):
            tm = np.uint64(sum(1 << i for i in T))
            sel = (block & tm) == tm
            if not sel.any():
                continue
            block_hit[sel] |= closure[(outside[sel] | tm).astype(np.int64)]
        hit[start:start + len(block)] = block_hit
    return hit


def _pairwise_violation(left: np.ndarray, right: np.ndarray, t: int,
                        same: bool) -> Optional[Tuple[int, int]]:
    if len(left) == 0 or len(right) == 0:
        return None
    step = max(1, (1 << 22) // len(right))
    for start in range(0, len(left), step):
        block = left[start:start + step]
        shared = popcount_array(block[:, None] & right[None, :])
        bad = shared < t
        if same:
            rows = np.arange(len(block))
            bad[rows, start + rows] = False
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return int(block[i]), int(right[j])
    return None


def _closure_usable(n: int, t: int) -> bool:
    return n <= CLOSURE_MAX_N and binomial(n, t - 1) <= PAIRWISE_LIMIT


def is_t_intersecting(family: Family, t: int) -> bool:
    """
    Every two distinct members share at least t elements.  Exact for any
    size: pairwise up to PAIRWISE_LIMIT members, subset closure beyond.
    """
    if t < 0:
        raise ParameterError(f"t must be >= 0, got {t}")
    if len(family) <= 1 or t == 0:
        return True
    arr = family.array
    if bool((family.sizes() < t).any()):
        return False
    n = family.ground_n
    if len(family) <= PAIRWISE_LIMIT or not _closure_usable(n, t):
        return _pairwise_violation(arr, arr, t, same=True) is None
    closure = _subset_closure(n, arr)
    return not bool(_meets_closure_weakly(n, t, arr, closure).any())


def max_t_intersecting(family: Family, t: int,
                       budget: Optional[EnumBudget] = None) -> Tuple[int, Family]:
    """
    The largest t-intersecting subfamily of ``family``: a maximum independent
    set of intersection(n, t) restricted to its members.
    """
    if t < 1:
        raise ParameterError(f"t must be >= 1, got {t}")
    graph = IntersectionGraph(family.ground_n, t)
    within = 0
    for m in family:
        within |= 1 << m
    return max_independent_set(graph, budget, within)


# ---------------------------------------------------------------------------
# Random sublattices
# ---------------------------------------------------------------------------

@dataclass
class RandomSample:
    n: int
    p: Fraction
    seed: int
    members: Family

    def regenerate(self) -> "RandomSample":
        return sample_lattice(self.n, self.p, self.seed)

    def to_dict(self) -> dict:
        return {"n": self.n, "p": rational_to_dict(self.p), "seed": str(self.seed),
                "size": str(len(self.members))}


def sample_lattice(n: int, p, seed: int) -> RandomSample:
    """
    Keep every mask of P(n) independently with probability p.  Masks are
    visited in canonical order and each draws one integer in [0, den), so
    the sample depends only on (n, p, seed).
    """
    check_ground(n)
    p = parse_fraction(p, "p")
    if not 0 <= p <= 1:
        raise ParameterError(f"p must be in [0, 1], got {format_fraction(p)}")
    if seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")
    num, den = p.numerator, p.denominator
    if den >= 1 << 62:
        raise ParameterError(f"denominator of p is too large: {den}")
    rng = np.random.default_rng(seed)
    parts = []
    for masks in iter_mask_chunks(n, _CHUNK):
        keep = rng.integers(0, den, size=len(masks), dtype=np.int64) < num
        if keep.any():
            parts.append(masks[keep])
    data = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint64)
    return RandomSample(n, p, seed, Family.from_sorted_array(n, data))


def sample_size_interval(n: int, p, confidence: float = 0.99) -> Tuple[int, int]:
    """Central binomial interval for |P(n,p)| at the given confidence."""
    from scipy.stats import binom

    p = parse_fraction(p, "p")
    if not 0 < confidence < 1:
        raise ParameterError(f"confidence must be in (0, 1), got {confidence}")
    lo, hi = binom.interval(confidence, 1 << n, float(p))
    return int(lo), int(hi)


def trial_seed(seed: int, trial: int) -> int:
    """A 64-bit seed for one trial, derived from (seed, trial) only."""
    state = np.random.SeedSequence([seed, trial]).generate_state(1, dtype=np.uint64)
    return int(state[0])


# ---------------------------------------------------------------------------
# The lower construction on a sample
# ---------------------------------------------------------------------------

def katona_lower_construction(sample: Family, t: int, a) -> Family:
    """
    (A_ex ∩ sample) ∪ {L ∈ A_lower ∩ sample : L meets every member of
    A_ex ∩ sample in at least t elements}.  Always t-intersecting.
    """
    n = sample.ground_n
    ex = build_A_ex(n, t).intersection(sample)
    low = build_A_lower(n, t, a).intersection(sample)
    if len(low) == 0 or len(ex) == 0:
        return ex.union(low)
    low_arr = low.array
    if _closure_usable(n, t) and len(ex) * len(low) > PAIRWISE_LIMIT ** 2:
        blocked = _meets_closure_weakly(n, t, low_arr, _subset_closure(n, ex.array))
    else:
        blocked = np.array([_pairwise_violation(low_arr[i:i + 1], ex.array, t, same=False)
                            is not None for i in range(len(low_arr))], dtype=bool)
    kept = Family.from_sorted_array(n, low_arr[~blocked])
    log.debug("lower construction: %d of %d lower-window sets kept next to %d large sets",
              len(kept), len(low), len(ex))
    return ex.union(kept)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass
class KatonaTrial:
    trial: int
    seed: int
    sample_size: int
    max_size: int
    ratio: Fraction

    def to_dict(self) -> dict:
        return {"trial": self.trial, "seed": str(self.seed), "sample_size": str(self.sample_size),
                "max_size": str(self.max_size), "ratio": rational_to_dict(self.ratio)}


@dataclass
class KatonaReport:
    n: int
    t: int
    p: Fraction
    seed: int
    trials: List[KatonaTrial] = field(default_factory=list)

    @property
    def K(self) -> int:
        return katona_K(self.n, self.t)

    @property
    def p2n(self) -> Fraction:
        return self.p * (1 << self.n)

    @property
    def mean_ratio(self) -> Fraction:
        if not self.trials:
            return Fraction(0)
        return sum((tr.ratio for tr in self.trials), Fraction(0)) / len(self.trials)

    @property
    def max_ratio(self) -> Fraction:
        return max((tr.ratio for tr in self.trials), default=Fraction(0))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "p": rational_to_dict(self.p),
            "seed": str(self.seed),
            "K": str(self.K),
            "p2n": rational_to_dict(self.p2n),
            "per_trial": [tr.to_dict() for tr in self.trials],
            "mean_ratio": rational_to_dict(self.mean_ratio),
            "max_ratio": rational_to_dict(self.max_ratio),
            "asymptotic_note": ASYMPTOTIC_NOTE,
        }

    @property
    def rows(self) -> List[dict]:
        return [{"trial": tr.trial, "sample_size": tr.sample_size, "max_size": tr.max_size,
                 "ratio": float(tr.ratio)} for tr in self.trials]


def monte_carlo_katona(n: int, t: int, p, trials: int, seed: int,
                       budget: Optional[EnumBudget] = None,
                       threads: int = 1) -> KatonaReport:
    """
    Exact largest t-intersecting family in ``trials`` independent samples of
    P(n, p).  Trial i uses ``trial_seed(seed, i)``, so the report does not
    depend on ``threads``.
    """
    _check_t(n, t)
    p = parse_fraction(p, "p")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    scale = p * (1 << n)

    def run_trial(i: int) -> KatonaTrial:
        s = trial_seed(seed, i)
        sample = sample_lattice(n, p, s).members
        size, _ = max_t_intersecting(sample, t, budget)
        ratio = Fraction(size) / scale if scale else Fraction(0)
        log.debug("trial %d: |sample|=%d, max=%d", i, len(sample), size)
        return KatonaTrial(i, s, len(sample), size, ratio)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run_trial, range(trials)))
    report = KatonaReport(n, t, p, seed, results)
    log.info("random-katona n=%d t=%d p=%s: mean ratio %.4f over %d trials",
             n, t, format_fraction(p), float(report.mean_ratio), trials)
    return report
