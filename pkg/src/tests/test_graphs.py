"""
test_graphs.py
==============

Tests for src/core/graphs.py.

Covers:
  - adjacency of every graph kind on hand-checked pairs
  - edge counts: comparability(2), hamming(3,1), bnk(3,1) as a 6-cycle,
    transport(4,2,1) as a triangle
  - memoised neighbour bitsets agree with the adjacency predicate
  - parameter validation (tilt p < q coprime, transport 2k <= n, bnk k < n)
  - graph spec parsing and canonical round trip; malformed specs
  - independence checks and NotIndependentError carrying the edge
  - family_of / bits_of conversions, pair vertices
  - networkx export matches the implicit edge count
  - tilted chains are cliques of the tilt graph
  - transportation distance
"""

import os
import sys
import unittest

_REPO_ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.insert(0, _REPO_ROOT)

from src.core.errors import GraphSpecError, NotIndependentError, ParameterError
from src.core.graphs import (
    BnkGraph,
    ComparabilityGraph,
    HammingGraph,
    IntersectionGraph,
    MonoDiffGraph,
    TiltGraph,
    TransportGraph,
    build_graph,
    iter_independent_sets,
    pair_space,
    parse_graph_spec,
    tilted_chain,
    transport_distance,
)
from src.core.lattice import DisjointPair, Family


def _brute_neighbor_bits(graph, i):
    u = graph.vertex(i)
    return sum(1 << j for j, v in enumerate(graph.vertices) if graph.adj(u, v))


class TestAdjacency(unittest.TestCase):

    def test_comparability(self):
        g = ComparabilityGraph(3)
        self.assertTrue(g.adj(0b001, 0b011))
        self.assertFalse(g.adj(0b001, 0b010))
        self.assertFalse(g.adj(0b011, 0b011))
        self.assertEqual(ComparabilityGraph(2).edge_count(), 5)

    def test_tilt(self):
        g = TiltGraph(3, 1, 2)
        # {1} vs {2,3}: |A∖B| = 1, |B∖A| = 2
        self.assertTrue(g.adj(0b001, 0b110))
        self.assertFalse(g.adj(0b001, 0b010))

    def test_hamming(self):
        g = HammingGraph(3, 1)
        self.assertTrue(g.adj(0, 0b011))
        self.assertFalse(g.adj(0, 0b111))
        self.assertEqual(g.edge_count(), 24)

    def test_intersection(self):
        g = IntersectionGraph(3, 1)
        self.assertTrue(g.adj(0b001, 0b110))
        self.assertFalse(g.adj(0b011, 0b110))
        self.assertEqual(g.degree(0), 7)

    def test_mono_diff(self):
        g = MonoDiffGraph(3, 0b001)
        self.assertTrue(g.adj(0, 0b001))
        self.assertTrue(g.adj(0, 0b110))
        self.assertFalse(g.adj(0, 0b011))

    def test_bnk_is_six_cycle(self):
        g = BnkGraph(3, 1)
        self.assertEqual(g.num_vertices, 6)
        self.assertEqual(g.edge_count(), 6)
        self.assertEqual(g.max_degree(), 2)

    def test_transport_triangle(self):
        g = TransportGraph(4, 2, 1)
        self.assertEqual(g.num_vertices, 3)
        self.assertEqual(g.edge_count(), 3)

    def test_neighbor_bits_match_predicate(self):
        for g in (ComparabilityGraph(3), TiltGraph(4, 1, 3), HammingGraph(4, 1),
                  IntersectionGraph(4, 2), MonoDiffGraph(4, 0b0101), BnkGraph(4, 1),
                  TransportGraph(5, 2, 1)):
            for i in range(g.num_vertices):
                self.assertEqual(g.neighbor_bits(i), _brute_neighbor_bits(g, i), (g.spec(), i))


class TestValidation(unittest.TestCase):

    def test_tilt_params(self):
        for p, q in ((0, 1), (2, 2), (2, 4), (3, 2)):
            with self.assertRaises(ParameterError):
                TiltGraph(4, p, q)

    def test_transport_params(self):
        with self.assertRaises(ParameterError):
            TransportGraph(3, 2, 1)
        with self.assertRaises(ParameterError):
            TransportGraph(4, 2, 0)

    def test_bnk_params(self):
        with self.assertRaises(ParameterError):
            BnkGraph(3, 3)

    def test_mono_diff_colour_class(self):
        with self.assertRaises(ParameterError):
            MonoDiffGraph(2, 0b100)


class TestSpecs(unittest.TestCase):

    def test_round_trip(self):
        for spec in ("comparability:n=4", "tilt:n=5,p=1,q=2", "hamming:n=6,t=1",
                     "intersection:n=4,t=2", "transport:n=6,k=2,t=1",
                     "mono_diff:n=4,R=0x3", "bnk:n=5,k=2"):
            self.assertEqual(parse_graph_spec(spec).spec(), spec)

    def test_element_notation_for_R(self):
        self.assertEqual(parse_graph_spec("mono_diff:n=4,R={1,2}").R, 0b11)

    def test_bad_specs(self):
        for bad in ("", "comparability", "nosuch:n=3", "tilt:n=5,p=1", "hamming:n=4,t=1,k=2"):
            with self.assertRaises(GraphSpecError, msg=bad):
                parse_graph_spec(bad)

    def test_build_graph(self):
        self.assertIsInstance(build_graph("bnk", n=4, k=1), BnkGraph)


class TestFamilies(unittest.TestCase):

    def test_bits_round_trip(self):
        g = BnkGraph(3, 1)
        fam = Family(3, [0b001, 0b110])
        self.assertEqual(g.family_of(g.bits_of(fam)), fam)

    def test_power_set_index_is_mask(self):
        g = ComparabilityGraph(3)
        self.assertEqual(g.bits_of([0b101]), 1 << 0b101)

    def test_require_independent(self):
        g = ComparabilityGraph(3)
        g.require_independent([0b011, 0b101, 0b110])
        with self.assertRaises(NotIndependentError) as ctx:
            g.require_independent([0b001, 0b011])
        self.assertEqual(set(ctx.exception.edge), {0b001, 0b011})

    def test_pair_family(self):
        g = TransportGraph(4, 2, 1)
        fam = g.family_of(0b1)
        self.assertTrue(fam.is_pairs)
        self.assertEqual(list(fam), [DisjointPair(0b0011, 0b1100)])
        self.assertEqual(g.index((0b1100, 0b0011)), 0)

    def test_independent_set_stream(self):
        g = BnkGraph(3, 1)
        sets = list(iter_independent_sets(g))
        self.assertEqual(sets[0], 0)
        self.assertEqual(len(sets), 18)
        self.assertTrue(all(g.is_independent(g.family_of(b)) for b in sets))

    def test_networkx_export(self):
        g = HammingGraph(4, 1)
        self.assertEqual(g.to_networkx().number_of_edges(), g.edge_count())


class TestTransport(unittest.TestCase):

    def test_pair_space_size(self):
        # binomial(6,2) * binomial(4,2) / 2
        self.assertEqual(len(pair_space(6, 2)), 45)

    def test_distance(self):
        x = DisjointPair.of(0b0011, 0b1100)
        y = DisjointPair.of(0b0101, 0b1010)
        self.assertEqual(transport_distance(x, y), 2)
        self.assertEqual(transport_distance(x, x), 0)
        self.assertEqual(transport_distance(x, DisjointPair.of(0b1100, 0b0011)), 0)

    def test_mismatched_k(self):
        with self.assertRaises(ParameterError):
            transport_distance(DisjointPair.of(1, 2), DisjointPair.of(0b0011, 0b1100))


class TestTiltedChain(unittest.TestCase):

    def test_chain_is_clique(self):
        chain = tilted_chain(6, 1, 2, 0, (3, 1, 4, 6, 2, 5))
        self.assertEqual(len(chain), 2)
        g = TiltGraph(6, 1, 2)
        members = list(chain)
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                self.assertTrue(g.adj(u, v))

    def test_explicit_members(self):
        chain = tilted_chain(6, 1, 2, 0, (1, 2, 3, 4, 5, 6))
        self.assertEqual(list(chain), sorted([0b110000, 0b100011]))

    def test_validation(self):
        with self.assertRaises(ParameterError):
            tilted_chain(5, 1, 2, 0, (1, 2, 3, 4, 5))
        with self.assertRaises(ParameterError):
            tilted_chain(6, 1, 2, 1, (1, 2, 3, 4, 5, 6))


if __name__ == "__main__":
    unittest.main()
