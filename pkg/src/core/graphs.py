"""
Auxiliary Graphs — Container Lab
================================

Implicit graphs on P(n) and on the disjoint-pair space Y(n, k) whose
independent sets are exactly the families being counted:

  comparability        antichains                       A ⊂ B or B ⊂ A
  tilt(p, q)           (p,q)-tilted Sperner families    p|A∖B| = q|B∖A| (either way)
  hamming(t)           t-error-correcting codes         d(A, B) <= 2t
  intersection(t)      t-intersecting families          |A ∩ B| < t
  transport(k, t)      2-(n,k,2t+1)-codes               transport distance <= 2t
  mono_diff(R)         mono-difference-free families    comparable, B∖A ⊆ R or ⊆ [n]∖R
  bnk(k)               antichains of B_{n,k}            layers k, k+1 joined by inclusion

Graphs are never materialised as edge lists.  Adjacency is computed from
masks; ``neighbor_bits(i)`` returns the neighbourhood as a Python-int bitset
over canonical vertex indices and is memoised per vertex, which is what the
container and enumeration engines consume.

Graph specs
-----------
``parse_graph_spec("tilt:n=5,p=1,q=2")`` builds a graph and ``graph.spec()``
gives the canonical string back.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.core.errors import GraphSpecError, GroundSetError, NotIndependentError, ParameterError
from src.core.lattice import (
    DisjointPair,
    Family,
    SetMask,
    check_ground,
    check_mask,
    complement,
    format_set,
    full_mask,
    iter_bits,
    iter_submasks,
    layer,
)
from src.core.utils import parse_int, parse_mask, parse_params


Vertex = Union[SetMask, DisjointPair]

# Graphs materialised for networkx cross-checks stay below this size.
NETWORKX_LIMIT = 4096


# ---------------------------------------------------------------------------
# Base class
# ---------------------------------------------------------------------------

class ImplicitGraph:
    """
    A vertex universe with a canonical index plus an adjacency predicate.

    Subclasses implement ``_adjacent`` and may override ``neighbors`` with a
    generator faster than the default scan.
    """

    kind = ""

    def __init__(self, n: int, vertices: Sequence[Vertex], index: Optional[Dict] = None):
        check_ground(n)
        self.n = n
        self._vertices = vertices
        self._index = index
        self._nbits: Dict[int, int] = {}

    # ------------------------------------------------------------------
    # Vertex universe
    # ------------------------------------------------------------------

    @property
    def vertices(self) -> Sequence[Vertex]:
        return self._vertices

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    def __len__(self) -> int:
        return len(self._vertices)

    def index(self, v: Vertex) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GroundSetError(f"{v} is not a vertex of {self.spec()}") from None

    def vertex(self, i: int) -> Vertex:
        return self._vertices[i]

    def has_vertex(self, v: Vertex) -> bool:
        return v in self._index

    @property
    def all_bits(self) -> int:
        return (1 << len(self._vertices)) - 1

    # ------------------------------------------------------------------
    # Adjacency
    # ------------------------------------------------------------------

    def adj(self, u: Vertex, v: Vertex) -> bool:
        if u == v:
            return False
        return self._adjacent(u, v)

    def _adjacent(self, u: Vertex, v: Vertex) -> bool:
        raise NotImplementedError

    def neighbors(self, u: Vertex) -> Iterator[Vertex]:
        """Neighbours of ``u`` (default: scan of the whole universe)."""
        for v in self._vertices:
            if v != u and self._adjacent(u, v):
                yield v

    def degree(self, u: Vertex) -> int:
        return self.neighbor_bits(self.index(u)).bit_count()

    def neighbor_bits(self, i: int) -> int:
        cached = self._nbits.get(i)
        if cached is None:
            bits = 0
            for v in self.neighbors(self._vertices[i]):
                bits |= 1 << self.index(v)
            self._nbits[i] = cached = bits
        return cached

    def neighbor_table(self) -> List[int]:
        return [self.neighbor_bits(i) for i in range(len(self._vertices))]

    def max_degree(self) -> int:
        return max((self.neighbor_bits(i).bit_count() for i in range(len(self._vertices))),
                   default=0)

    def edge_count(self) -> int:
        return sum(self.neighbor_bits(i).bit_count() for i in range(len(self._vertices))) // 2

    # ------------------------------------------------------------------
    # Families <-> index bitsets
    # ------------------------------------------------------------------

    def bits_of(self, family: Iterable[Vertex]) -> int:
        bits = 0
        for v in family:
            bits |= 1 << self.index(v)
        return bits

    def family_of(self, bits: int) -> Family:
        return Family(self.n, [self._vertices[i] for i in iter_bits(bits)],
                      pairs=self.pair_vertices)

    @property
    def pair_vertices(self) -> bool:
        return False

    def find_edge(self, family: Iterable[Vertex]) -> Optional[Tuple[Vertex, Vertex]]:
        bits = self.bits_of(family)
        for i in iter_bits(bits):
            hit = self.neighbor_bits(i) & bits
            if hit:
                j = (hit & -hit).bit_length() - 1
                return self._vertices[i], self._vertices[j]
        return None

    def is_independent(self, family: Iterable[Vertex]) -> bool:
        return self.find_edge(family) is None

    def require_independent(self, family: Iterable[Vertex]) -> None:
        edge = self.find_edge(family)
        if edge is not None:
            raise NotIndependentError(
                f"family is not independent in {self.spec()}: "
                f"{_show(edge[0])} ~ {_show(edge[1])}", edge)

    # ------------------------------------------------------------------
    # Description
    # ------------------------------------------------------------------

    def params(self) -> Dict[str, int]:
        return {"n": self.n}

    def spec(self) -> str:
        body = ",".join(
            f"{k}={v:#x}" if k == "R" else f"{k}={v}" for k, v in self.params().items())
        return f"{self.kind}:{body}"

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec()} |V|={len(self._vertices)}>"

    def to_networkx(self):
        """Materialise as a ``networkx.Graph`` whose nodes are vertex indices."""
        import networkx as nx

        if len(self._vertices) > NETWORKX_LIMIT:
            raise ParameterError(
                f"{self.spec()} has {len(self._vertices)} vertices; "
                f"networkx export is limited to {NETWORKX_LIMIT}")
        g = nx.Graph()
        g.add_nodes_from(range(len(self._vertices)))
        for i in range(len(self._vertices)):
            for j in iter_bits(self.neighbor_bits(i) >> (i + 1)):
                g.add_edge(i, i + 1 + j)
        return g


class _PowerSetGraph(ImplicitGraph):
    """Vertex universe P(n); the vertex index is the mask itself."""

    def __init__(self, n: int):
        check_ground(n)
        super().__init__(n, range(1 << n))

    def index(self, v: Vertex) -> int:
        if not isinstance(v, int) or v < 0 or v >> self.n:
            raise GroundSetError(f"{v!r} is not a subset of [{self.n}]")
        return v

    def has_vertex(self, v: Vertex) -> bool:
        return isinstance(v, int) and 0 <= v and not v >> self.n

    def family_of(self, bits: int) -> Family:
        return Family(self.n, list(iter_bits(bits)))

    def _submask_neighbors(self, u: SetMask, allowed_diff: Iterable[SetMask]) -> List[SetMask]:
        out = []
        comp = complement(u, self.n)
        for region in allowed_diff:
            for d in iter_submasks(region & u):
                if d:
                    out.append(u ^ d)
            for d in iter_submasks(region & comp):
                if d:
                    out.append(u | d)
        return sorted(out)


# ---------------------------------------------------------------------------
# Graph kinds
# ---------------------------------------------------------------------------

class ComparabilityGraph(_PowerSetGraph):
    kind = "comparability"

    def _adjacent(self, u, v):
        return (u & v) == u or (u & v) == v

    def neighbors(self, u):
        return iter(self._submask_neighbors(u, [full_mask(self.n)]))


class TiltGraph(_PowerSetGraph):
    kind = "tilt"

    def __init__(self, n: int, p: int, q: int):
        if p < 1:
            raise ParameterError(f"tilt requires p >= 1, got p={p}")
        if p >= q:
            raise ParameterError(f"tilt requires p < q, got p={p}, q={q}")
        if math.gcd(p, q) != 1:
            raise ParameterError(f"tilt requires coprime p, q, got p={p}, q={q}")
        super().__init__(n)
        self.p = p
        self.q = q

    def _adjacent(self, u, v):
        a = (u & ~v).bit_count()
        b = (v & ~u).bit_count()
        return self.p * a == self.q * b or self.q * a == self.p * b

    def params(self):
        return {"n": self.n, "p": self.p, "q": self.q}


class HammingGraph(_PowerSetGraph):
    kind = "hamming"

    def __init__(self, n: int, t: int):
        if t < 1:
            raise ParameterError(f"hamming requires t >= 1, got t={t}")
        super().__init__(n)
        self.t = t
        self._flips = [sum(1 << i for i in c)
                       for r in range(1, min(2 * t, n) + 1)
                       for c in combinations(range(n), r)]

    def _adjacent(self, u, v):
        return (u ^ v).bit_count() <= 2 * self.t

    def neighbors(self, u):
        return iter(sorted(u ^ f for f in self._flips))

    def params(self):
        return {"n": self.n, "t": self.t}


class IntersectionGraph(_PowerSetGraph):
    """Adjacent when two sets share fewer than t elements."""

    kind = "intersection"

    def __init__(self, n: int, t: int):
        if t < 1:
            raise ParameterError(f"intersection requires t >= 1, got t={t}")
        super().__init__(n)
        self.t = t

    def _adjacent(self, u, v):
        return (u & v).bit_count() < self.t

    def neighbors(self, u):
        comp = complement(u, self.n)
        out = []
        for shared in iter_submasks(u):
            if shared.bit_count() >= self.t:
                continue
            for rest in iter_submasks(comp):
                v = shared | rest
                if v != u:
                    out.append(v)
        return iter(sorted(out))

    def params(self):
        return {"n": self.n, "t": self.t}


class MonoDiffGraph(_PowerSetGraph):
    """Comparable pairs whose difference lies inside R or inside [n] ∖ R."""

    kind = "mono_diff"

    def __init__(self, n: int, R: SetMask):
        super().__init__(n)
        try:
            check_mask(R, n)
        except GroundSetError:
            raise ParameterError(f"colour class R={R:#x} is not a subset of [{n}]") from None
        self.R = R
        self.W = complement(R, n)

    def _adjacent(self, u, v):
        if (u & v) != u and (u & v) != v:
            return False
        diff = u ^ v
        return (diff & ~self.R) == 0 or (diff & ~self.W) == 0

    def neighbors(self, u):
        return iter(self._submask_neighbors(u, [self.R, self.W]))

    def params(self):
        return {"n": self.n, "R": self.R}


class BnkGraph(ImplicitGraph):
    """Bipartite inclusion graph between layers k and k+1 of P(n)."""

    kind = "bnk"

    def __init__(self, n: int, k: int):
        check_ground(n)
        if not 0 <= k < n:
            raise ParameterError(f"bnk requires 0 <= k < n, got n={n}, k={k}")
        vertices = tuple(sorted(layer(n, k) + layer(n, k + 1)))
        super().__init__(n, vertices, {v: i for i, v in enumerate(vertices)})
        self.k = k

    def _adjacent(self, u, v):
        if abs(u.bit_count() - v.bit_count()) != 1:
            return False
        return (u & v) == u or (u & v) == v

    def neighbors(self, u):
        if u.bit_count() == self.k:
            out = [u | (1 << i) for i in range(self.n) if not u >> i & 1]
        else:
            out = [u ^ (1 << i) for i in iter_bits(u)]
        return iter(sorted(out))

    def params(self):
        return {"n": self.n, "k": self.k}


class TransportGraph(ImplicitGraph):
    """
    Vertices are unordered pairs of disjoint k-sets; adjacent when their
    transportation distance is at most 2t.
    """

    kind = "transport"

    def __init__(self, n: int, k: int, t: int):
        check_ground(n)
        if k < 1 or 2 * k > n:
            raise ParameterError(f"transport requires 1 <= k and 2k <= n, got n={n}, k={k}")
        if t < 1:
            raise ParameterError(f"transport requires t >= 1, got t={t}")
        vertices = tuple(pair_space(n, k))
        super().__init__(n, vertices, {v: i for i, v in enumerate(vertices)})
        self.k = k
        self.t = t

    @property
    def pair_vertices(self) -> bool:
        return True

    def _adjacent(self, u, v):
        return transport_distance(u, v) <= 2 * self.t

    def index(self, v):
        if isinstance(v, tuple) and not isinstance(v, DisjointPair):
            v = DisjointPair.of(*v)
        return super().index(v)

    def params(self):
        return {"n": self.n, "k": self.k, "t": self.t}


# ---------------------------------------------------------------------------
# Pair space and transportation distance
# ---------------------------------------------------------------------------

def pair_space(n: int, k: int) -> List[DisjointPair]:
    """All unordered pairs of disjoint k-subsets of [n], lexicographic."""
    ks = layer(n, k)
    out = [DisjointPair(a, b) for a in ks for b in ks if a < b and not a & b]
    out.sort()
    return out


def transport_distance(x: DisjointPair, y: DisjointPair) -> int:
    """Enomoto–Katona distance between two disjoint-pair vertices."""
    kx, ky = x.first.bit_count(), y.first.bit_count()
    if kx != ky or x.second.bit_count() != kx or y.second.bit_count() != ky:
        raise ParameterError(f"pairs {x} and {y} have different k")
    straight = (x.first & ~y.first).bit_count() + (x.second & ~y.second).bit_count()
    crossed = (x.first & ~y.second).bit_count() + (x.second & ~y.first).bit_count()
    return min(straight, crossed)


# ---------------------------------------------------------------------------
# Construction and parsing
# ---------------------------------------------------------------------------

GRAPH_KINDS = {
    "comparability": (ComparabilityGraph, ("n",)),
    "tilt":          (TiltGraph,          ("n", "p", "q")),
    "hamming":       (HammingGraph,       ("n", "t")),
    "intersection":  (IntersectionGraph,  ("n", "t")),
    "transport":     (TransportGraph,     ("n", "k", "t")),
    "mono_diff":     (MonoDiffGraph,      ("n", "R")),
    "bnk":           (BnkGraph,           ("n", "k")),
}


def build_graph(kind: str, **params) -> ImplicitGraph:
    """
    Build a graph of a named kind.

    Raises:
        GraphSpecError: Unknown kind, missing or unexpected parameters.
        ParameterError: Parameters violate the kind's constraints.
    """
    try:
        cls, names = GRAPH_KINDS[kind]
    except KeyError:
        raise GraphSpecError(
            f"unknown graph kind {kind!r}; expected one of {', '.join(GRAPH_KINDS)}") from None
    missing = [p for p in names if p not in params]
    extra = [p for p in params if p not in names]
    if missing or extra:
        raise GraphSpecError(
            f"{kind} takes parameters {', '.join(names)}"
            + (f"; missing {', '.join(missing)}" if missing else "")
            + (f"; unexpected {', '.join(extra)}" if extra else ""))
    return cls(**{p: int(params[p]) for p in names})


def parse_graph_spec(text: str) -> ImplicitGraph:
    """
    Parse ``"<kind>:<key>=<value>,..."`` into a graph.

    Examples:
        "comparability:n=4"
        "mono_diff:n=4,R=0x3"
        "transport:n=6,k=2,t=1"
    """
    if not text or ":" not in text:
        raise GraphSpecError(f"graph spec must look like kind:n=..., got {text!r}")
    kind, _, body = text.partition(":")
    raw = parse_params(body)
    params = {}
    for key, value in raw.items():
        params[key] = parse_mask(value, key) if key == "R" else parse_int(value, key)
    return build_graph(kind.strip(), **params)


def tilted_chain(n: int, p: int, q: int, offset: int, pi: Sequence[int]) -> Family:
    """
    The chain C_pi used when averaging over orderings.  Writing pi as
    (a_1..a_qm, b_1..b_pm) with n = (p+q)m, C_i = {a_j : j <= qi+offset} ∪
    {b_j : pi < j <= pm} for 0 <= i < m.  Any two members are tilted
    adjacent, so the chain is a clique of tilt(n, p, q).
    """
    if p < 1 or p >= q or math.gcd(p, q) != 1:
        raise ParameterError(f"need coprime 1 <= p < q, got p={p}, q={q}")
    if n % (p + q):
        raise ParameterError(f"n={n} is not a multiple of p+q={p + q}")
    if not 0 <= offset <= q - p - 1:
        raise ParameterError(f"offset must be in [0, {q - p - 1}], got {offset}")
    order = tuple(int(x) for x in pi)
    if sorted(order) != list(range(1, n + 1)):
        raise ParameterError(f"not a permutation of [{n}]: {order}")
    m = n // (p + q)
    a, b = order[:q * m], order[q * m:]
    chain = []
    for i in range(m):
        members = a[:q * i + offset] + b[p * i:]
        chain.append(sum(1 << (e - 1) for e in members))
    return Family(n, chain)


def _show(v: Vertex) -> str:
    return str(v) if isinstance(v, DisjointPair) else format_set(v)


# ---------------------------------------------------------------------------
# Independent-set streams
# ---------------------------------------------------------------------------

def iter_independent_sets(graph: ImplicitGraph, within: Optional[int] = None,
                          tracker=None) -> Iterator[int]:
    """
    Every independent set (as an index bitset, ∅ first) in lexicographic
    order of sorted vertex indices.  ``within`` restricts to an induced
    subgraph; ``tracker`` is a BudgetTracker ticked once per set.
    """
    pool = graph.all_bits if within is None else within

    def extend(candidates: int, current: int) -> Iterator[int]:
        if tracker is not None:
            tracker.tick()
        yield current
        for v in iter_bits(candidates):
            later = candidates >> (v + 1) << (v + 1)
            yield from extend(later & ~graph.neighbor_bits(v), current | (1 << v))

    yield from extend(pool, 0)
