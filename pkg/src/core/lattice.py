"""
Lattice Core — Container Lab
============================

Set encodings, exact combinatorial arithmetic, symmetric chain
decompositions and permutation actions on the Boolean lattice P(n).

Encoding
--------
* A subset of [n] = {1, ..., n} is an ``int`` bit vector: element ``i`` is
  bit ``i - 1``.  ``SetMask`` is an alias kept for readability.
* The canonical total order on masks is ascending integer value.
* Ground sets are limited to n <= 63 so every mask fits a uint64 word.
* ``Family`` stores members in a sorted, duplicate-free numpy uint64 array
  (shape ``(m,)`` for masks, ``(m, 2)`` for disjoint pairs), so families of
  tens of millions of sets stay cheap.  Iteration yields Python ints (or
  ``DisjointPair`` values), so callers never see numpy scalars.
* Counts are exact Python ints; non-integral bounds are ``Fraction``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import GroundSetError, ParameterError


SetMask = int
Permutation = Tuple[int, ...]

MAX_GROUND = 63

# Rational lower approximation of e; makes the Fact-2.3 style check conservative.
_E_LOWER = Fraction(271828, 100000)


# ---------------------------------------------------------------------------
# Mask helpers
# ---------------------------------------------------------------------------

def check_ground(n: int) -> None:
    if not isinstance(n, int) or n < 0 or n > MAX_GROUND:
        raise GroundSetError(f"ground set size must be in [0, {MAX_GROUND}], got {n!r}")


def check_mask(mask: int, n: int) -> None:
    if mask < 0 or mask >> n:
        raise GroundSetError(f"mask {mask:#x} has bits outside [{n}]")


def full_mask(n: int) -> SetMask:
    return (1 << n) - 1


def complement(mask: SetMask, n: int) -> SetMask:
    return full_mask(n) ^ mask


def cardinality(mask: SetMask) -> int:
    return mask.bit_count()


def mask_from_elements(elements: Iterable[int]) -> SetMask:
    """{1, 3} -> 0b101.  Elements are 1-based."""
    mask = 0
    for e in elements:
        if e < 1:
            raise GroundSetError(f"elements are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: SetMask) -> Tuple[int, ...]:
    """0b101 -> (1, 3)."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def iter_bits(x: int) -> Iterator[int]:
    """Positions (0-based) of the set bits of ``x``, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def format_set(mask: SetMask) -> str:
    return "{" + ",".join(str(e) for e in elements_of(mask)) + "}"


def iter_submasks(mask: SetMask) -> Iterator[SetMask]:
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def layer(n: int, k: int) -> List[SetMask]:
    """All k-subsets of [n] in canonical order."""
    if k < 0 or k > n:
        return []
    return sorted(sum(1 << i for i in c) for c in combinations(range(n), k))


# ---------------------------------------------------------------------------
# Exact arithmetic
# ---------------------------------------------------------------------------

def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def binom_at_least(n: int, k: int) -> int:
    """Number of subsets of [n] with at least k elements."""
    return sum(binomial(n, i) for i in range(max(k, 0), n + 1))


def hamming_distance(a: SetMask, b: SetMask, n: Optional[int] = None) -> int:
    if n is not None:
        check_mask(a, n)
        check_mask(b, n)
    return (a ^ b).bit_count()


def central_binomial_ratio(n: int) -> float:
    """binomial(n, n/2) * sqrt(pi n / 2) / 2^n; tends to 1."""
    return float(Fraction(binomial(n, n // 2), 1 << n)) * math.sqrt(math.pi * n / 2)


def binomial_power_bound_holds(n: int, k: int) -> bool:
    """Exact check of binomial(n, k) <= (e n / k)^k with e rounded down."""
    if k < 1 or k > n:
        raise ParameterError(f"need 1 <= k <= n, got n={n}, k={k}")
    return binomial(n, k) <= (_E_LOWER * n / k) ** k


# ---------------------------------------------------------------------------
# Disjoint pairs
# ---------------------------------------------------------------------------

class DisjointPair(NamedTuple):
    """
    An unordered pair of disjoint k-sets, stored canonically with
    ``first < second``.  Build through ``DisjointPair.of`` to get validation
    and canonical order.
    """
    first: SetMask
    second: SetMask

    @classmethod
    def of(cls, a: SetMask, b: SetMask) -> "DisjointPair":
        if a & b:
            raise ParameterError(f"pair sides intersect: {format_set(a)}, {format_set(b)}")
        if a.bit_count() != b.bit_count():
            raise ParameterError(
                f"pair sides differ in size: {format_set(a)}, {format_set(b)}")
        return cls(a, b) if a < b else cls(b, a)

    @property
    def k(self) -> int:
        return self.first.bit_count()

    def __str__(self) -> str:
        return f"({format_set(self.first)},{format_set(self.second)})"


# ---------------------------------------------------------------------------
# numpy helpers
# ---------------------------------------------------------------------------

_BYTE_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def popcount_array(arr: np.ndarray) -> np.ndarray:
    """Vectorised popcount of a uint64 array; returns int64 of the same shape."""
    arr = np.ascontiguousarray(arr, dtype=np.uint64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(arr).astype(np.int64)
    as_bytes = arr.view(np.uint8).reshape(arr.shape + (8,))
    return _BYTE_POPCOUNT[as_bytes].sum(axis=-1, dtype=np.int64)


def iter_mask_chunks(n: int, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """All masks of P(n) in canonical order, as uint64 chunks."""
    check_ground(n)
    total = 1 << n
    start = 0
    while start < total:
        stop = min(total, start + chunk)
        yield np.arange(start, stop, dtype=np.uint64)
        start = stop


def select_masks(n: int, keep: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> np.ndarray:
    """
    Scan P(n) in chunks and return the sorted masks for which
    ``keep(masks, sizes)`` is true.
    """
    parts = []
    for masks in iter_mask_chunks(n):
        sel = keep(masks, popcount_array(masks))
        if sel.any():
            parts.append(masks[sel])
    if not parts:
        return np.zeros(0, dtype=np.uint64)
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# Family
# ---------------------------------------------------------------------------

class Family:
    """
    A duplicate-free, canonically ordered family of subsets of [n]
    (or of disjoint pairs of subsets).

    Members are kept in a read-only numpy array; ``len``, ``in`` and
    iteration behave like a sorted tuple of ints.
    """

    __slots__ = ("_n", "_data", "_pairs")

    def __init__(self, ground_n: int, members: Iterable = (), *, pairs: bool = False):
        check_ground(ground_n)
        data, pairs = _members_to_array(ground_n, members, pairs)
        if pairs:
            data = np.unique(data, axis=0) if len(data) else data.reshape(0, 2)
        else:
            data = np.unique(data)
        data.setflags(write=False)
        self._n = ground_n
        self._data = data
        self._pairs = pairs

    @classmethod
    def from_sorted_array(cls, ground_n: int, data: np.ndarray) -> "Family":
        """Wrap an already sorted, unique, validated uint64 mask array."""
        fam = cls.__new__(cls)
        data = np.ascontiguousarray(data, dtype=np.uint64)
        data.setflags(write=False)
        fam._n = ground_n
        fam._data = data
        fam._pairs = False
        return fam

    @classmethod
    def full(cls, n: int) -> "Family":
        check_ground(n)
        return cls.from_sorted_array(n, np.arange(1 << n, dtype=np.uint64))

    # ------------------------------------------------------------------
    # Container protocol
    # ------------------------------------------------------------------

    @property
    def ground_n(self) -> int:
        return self._n

    @property
    def is_pairs(self) -> bool:
        return self._pairs

    @property
    def array(self) -> np.ndarray:
        return self._data

    def __len__(self) -> int:
        return int(self._data.shape[0])

    def __iter__(self) -> Iterator[Union[SetMask, DisjointPair]]:
        if self._pairs:
            for a, b in self._data.tolist():
                yield DisjointPair(a, b)
        else:
            yield from self._data.tolist()

    def __contains__(self, item) -> bool:
        if self._pairs:
            if not isinstance(item, tuple) or len(item) != 2:
                return False
            a, b = sorted((int(item[0]), int(item[1])))
            if len(self._data) == 0:
                return False
            hit = (self._data[:, 0] == np.uint64(a)) & (self._data[:, 1] == np.uint64(b))
            return bool(hit.any())
        if not isinstance(item, (int, np.integer)) or item < 0 or item >> self._n:
            return False
        pos = int(np.searchsorted(self._data, np.uint64(item)))
        return pos < len(self._data) and int(self._data[pos]) == int(item)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return (self._n == other._n and self._pairs == other._pairs
                and np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self._n, self._pairs, self._data.tobytes()))

    def __repr__(self) -> str:
        shown = ", ".join(str(m) if self._pairs else format_set(m)
                          for m in list(self)[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"Family(n={self._n}, [{shown}{more}])"

    @property
    def members(self) -> list:
        return list(self)

    # ------------------------------------------------------------------
    # Set algebra
    # ------------------------------------------------------------------

    def _check_compatible(self, other: "Family") -> None:
        if self._n != other._n:
            raise GroundSetError(f"ground sets differ: {self._n} vs {other._n}")
        if self._pairs != other._pairs:
            raise ParameterError("cannot combine a mask family with a pair family")

    def union(self, other: "Family") -> "Family":
        self._check_compatible(other)
        if self._pairs:
            return Family(self._n, list(self) + list(other), pairs=True)
        return Family.from_sorted_array(self._n, np.union1d(self._data, other._data))

    def intersection(self, other: "Family") -> "Family":
        self._check_compatible(other)
        if self._pairs:
            keep = set(other)
            return Family(self._n, [m for m in self if m in keep], pairs=True)
        return Family.from_sorted_array(self._n, np.intersect1d(self._data, other._data))

    def issubset(self, other: "Family") -> bool:
        self._check_compatible(other)
        if self._pairs:
            return set(self) <= set(other)
        return bool(np.isin(self._data, other._data).all())

    def sizes(self) -> np.ndarray:
        if self._pairs:
            return popcount_array(self._data[:, 0])
        return popcount_array(self._data)

    def filter(self, predicate: Callable) -> "Family":
        return Family(self._n, [m for m in self if predicate(m)], pairs=self._pairs)

    def to_dict(self) -> dict:
        if self._pairs:
            members = [f"{a:x},{b:x}" for a, b in self]
        else:
            members = [f"{m:x}" for m in self]
        return {"n": self._n, "size": str(len(self)), "members": members}


def _members_to_array(n: int, members, pairs: bool) -> Tuple[np.ndarray, bool]:
    if isinstance(members, Family):
        if members.ground_n != n:
            raise GroundSetError(f"ground sets differ: {members.ground_n} vs {n}")
        return np.array(members.array, copy=True), members.is_pairs

    if isinstance(members, np.ndarray):
        data = np.ascontiguousarray(members, dtype=np.uint64)
        pairs = data.ndim == 2
        if data.size and bool(((data >> np.uint64(n)) != 0).any()):
            raise GroundSetError(f"family has members outside [{n}]")
        if pairs:
            data = _canonical_pairs(data)
        return data, pairs

    items = list(members)
    if items and isinstance(items[0], tuple):
        pairs = True
    if pairs:
        rows = []
        for item in items:
            a, b = int(item[0]), int(item[1])
            check_mask(a, n)
            check_mask(b, n)
            rows.append(tuple(DisjointPair.of(a, b)))
        data = np.array(rows, dtype=np.uint64).reshape(-1, 2)
        return data, True
    for m in items:
        check_mask(int(m), n)
    return np.fromiter((int(m) for m in items), dtype=np.uint64, count=len(items)), False


def _canonical_pairs(data: np.ndarray) -> np.ndarray:
    if data.shape[1] != 2:
        raise ParameterError("pair arrays must have shape (m, 2)")
    if len(data) == 0:
        return data
    if bool(((data[:, 0] & data[:, 1]) != 0).any()):
        raise ParameterError("pair family has intersecting sides")
    if not np.array_equal(popcount_array(data[:, 0]), popcount_array(data[:, 1])):
        raise ParameterError("pair family has sides of different sizes")
    lo = np.minimum(data[:, 0], data[:, 1])
    hi = np.maximum(data[:, 0], data[:, 1])
    return np.stack([lo, hi], axis=1)


# ---------------------------------------------------------------------------
# Symmetric chain decompositions
# ---------------------------------------------------------------------------

class SCD:
    """A partition of P(n) into symmetric saturated chains."""

    def __init__(self, n: int, chains: Iterable[Sequence[SetMask]]):
        check_ground(n)
        self.n = n
        self.chains: Tuple[Tuple[SetMask, ...], ...] = tuple(tuple(c) for c in chains)
        self._where: Dict[SetMask, int] = {}
        for idx, chain in enumerate(self.chains):
            for mask in chain:
                self._where[mask] = idx

    def __len__(self) -> int:
        return len(self.chains)

    def __iter__(self):
        return iter(self.chains)

    def chain_index(self, mask: SetMask) -> int:
        try:
            return self._where[mask]
        except KeyError:
            raise GroundSetError(f"{format_set(mask)} is not covered by this SCD") from None

    def to_dict(self) -> dict:
        return {"n": self.n, "chains": [[f"{m:x}" for m in c] for c in self.chains]}


def _bracket_scan(mask: SetMask, n: int) -> Tuple[List[int], int]:
    """
    Read element i as ')' when i is in the set and '(' otherwise, then match.
    Returns (unmatched '(' positions ascending, number of unmatched ')').
    """
    stack: List[int] = []
    unmatched_close = 0
    for i in range(n):
        if mask >> i & 1:
            if stack:
                stack.pop()
            else:
                unmatched_close += 1
        else:
            stack.append(i)
    return stack, unmatched_close


def build_scd(n: int) -> SCD:
    """
    Canonical SCD by bracket matching.  A chain starts at every set with no
    unmatched ')' and grows by turning its unmatched '(' into ')' from left
    to right.  Chains are listed by ascending minimal element.
    """
    check_ground(n)
    chains = []
    for start in range(1 << n):
        open_positions, unmatched_close = _bracket_scan(start, n)
        if unmatched_close:
            continue
        chain = [start]
        cur = start
        for pos in open_positions:
            cur |= 1 << pos
            chain.append(cur)
        chains.append(chain)
    return SCD(n, chains)


def validate_scd(scd: SCD, n: Optional[int] = None) -> List[str]:
    """Return a list of violated SCD conditions (empty when valid)."""
    n = scd.n if n is None else n
    problems: List[str] = []
    seen: Dict[int, int] = {}
    for idx, chain in enumerate(scd.chains):
        if not chain:
            problems.append(f"chain {idx} is empty")
            continue
        for mask in chain:
            if mask < 0 or mask >> n:
                problems.append(f"chain {idx} has {mask:#x} outside [{n}]")
            if mask in seen:
                problems.append(f"{format_set(mask)} lies on chains {seen[mask]} and {idx}")
            seen[mask] = idx
        for lower, upper in zip(chain, chain[1:]):
            if lower & ~upper or upper.bit_count() != lower.bit_count() + 1:
                problems.append(f"chain {idx} is not saturated at {format_set(lower)}")
        lo, hi = chain[0].bit_count(), chain[-1].bit_count()
        if lo + hi != n:
            problems.append(f"chain {idx} spans sizes {lo}..{hi}, not symmetric")
    if len(seen) != 1 << n:
        problems.append(f"chains cover {len(seen)} of {1 << n} sets")
    expected = binomial(n, n // 2)
    if len(scd.chains) != expected:
        problems.append(f"{len(scd.chains)} chains, expected {expected}")
    return problems


def chain_length_profile(scd: SCD) -> Dict[int, int]:
    profile: Dict[int, int] = {}
    for chain in scd.chains:
        profile[len(chain)] = profile.get(len(chain), 0) + 1
    return dict(sorted(profile.items()))


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------

def check_permutation(pi: Sequence[int], n: Optional[int] = None) -> Permutation:
    """Validate a 1-based permutation given as images (pi[i-1] = pi(i))."""
    pi = tuple(int(x) for x in pi)
    if n is not None and len(pi) != n:
        raise ParameterError(f"permutation has length {len(pi)}, expected {n}")
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise ParameterError(f"not a permutation of [{len(pi)}]: {pi}")
    return pi


def identity_permutation(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def compose(pi: Sequence[int], sigma: Sequence[int]) -> Permutation:
    """(pi o sigma)(i) = pi(sigma(i))."""
    return tuple(pi[s - 1] for s in sigma)


def invert(pi: Sequence[int]) -> Permutation:
    out = [0] * len(pi)
    for i, image in enumerate(pi, start=1):
        out[image - 1] = i
    return tuple(out)


def _permute_mask(pi: Permutation, mask: SetMask) -> SetMask:
    out = 0
    for pos in iter_bits(mask):
        out |= 1 << (pi[pos] - 1)
    return out


def apply_permutation(pi: Sequence[int], obj):
    """
    Image of a mask, DisjointPair, Family or SCD under the element
    permutation ``pi``.
    """
    pi = check_permutation(pi)
    n = len(pi)
    if isinstance(obj, DisjointPair):
        check_mask(obj.first, n)
        check_mask(obj.second, n)
        return DisjointPair.of(_permute_mask(pi, obj.first), _permute_mask(pi, obj.second))
    if isinstance(obj, Family):
        if obj.ground_n != n:
            raise GroundSetError(f"permutation of [{n}] applied to family on [{obj.ground_n}]")
        if obj.is_pairs:
            return Family(n, [(_permute_mask(pi, a), _permute_mask(pi, b)) for a, b in obj],
                          pairs=True)
        return Family(n, [_permute_mask(pi, m) for m in obj])
    if isinstance(obj, SCD):
        if obj.n != n:
            raise GroundSetError(f"permutation of [{n}] applied to SCD on [{obj.n}]")
        return SCD(n, [[_permute_mask(pi, m) for m in chain] for chain in obj.chains])
    mask = int(obj)
    check_mask(mask, n)
    return _permute_mask(pi, mask)


def sample_permutation(n: int, seed: int) -> Permutation:
    """Uniform permutation of [n], deterministic per seed."""
    rng = np.random.default_rng(seed)
    return tuple(int(x) + 1 for x in rng.permutation(n))
