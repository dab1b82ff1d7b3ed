"""
test_supersaturation.py
=======================

Tests for src/tools/supersaturation.py.

Covers:
  - induced edge counts and maximum induced degree
  - exhaustive and seeded random minimisers, argument validation
  - Kleitman: bound, layer witness, equality at the middle two layers
  - Hamming, degree, tilt (with the reference count), transport, mono and
    disjointness checks on hand-checked small cases
  - difference profiles and the weighted profile value
  - SCD bad pairs, pigeonhole over random SCD images
  - sweeps: pigeonhole over every family at n = 3 and sampled families at
    n = 4; Hamming, degree, transport and disjointness checks over x
  - top-layer families and tilted-chain hit averages
  - LemmaCheck serialisation
"""

import os
import sys
import unittest
from fractions import Fraction

_REPO_ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.insert(0, _REPO_ROOT)

from src.core.budget import EnumBudget
from src.core.errors import BudgetExceeded, EmptyFamilyError, ParameterError
from src.core.graphs import ComparabilityGraph
from src.core.lattice import Family, build_scd
from src.tools.supersaturation import (
    EXHAUSTIVE,
    RANDOM,
    check_claim_cd,
    check_hamming,
    check_hamming_degree,
    check_kleitman,
    check_mono,
    check_prop64,
    check_scd_pigeonhole,
    check_tilt,
    check_transport,
    count_comparable_pairs,
    count_edges_in_induced,
    count_mono_pairs,
    difference_profile,
    max_degree_induced,
    min_edges_over_families,
    minimize_over_families,
    scd_bad_pairs,
    scd_pigeonhole_sweep,
    tilted_chain_hits,
    top_layer_min_disjoint,
)


class TestCounters(unittest.TestCase):

    def test_edges_in_induced(self):
        self.assertEqual(count_edges_in_induced(ComparabilityGraph(2), [0, 1, 3]), 3)
        self.assertEqual(count_edges_in_induced(ComparabilityGraph(2), [1, 2]), 0)

    def test_max_degree(self):
        self.assertEqual(max_degree_induced(ComparabilityGraph(2), [0, 1, 2]), (0, 2))
        with self.assertRaises(EmptyFamilyError):
            max_degree_induced(ComparabilityGraph(2), [])

    def test_profile(self):
        profile = difference_profile(Family(2, [0, 1, 3]))
        self.assertEqual(profile.counts, [0, 2, 1])
        self.assertEqual(profile.total, 3)
        self.assertEqual(profile.b_geq(2), 1)
        self.assertEqual(profile.weighted_value(1), Fraction(3, 2))
        self.assertEqual(profile.weighted_value(2), 2)
        self.assertEqual(profile.to_dict()["B"], {"1": 2, "2": 1})
        self.assertEqual(count_comparable_pairs(Family(2, [0, 1, 3])), 3)

    def test_mono_pairs(self):
        self.assertEqual(count_mono_pairs(Family(2, [0, 3]), 0b01), 0)
        self.assertEqual(count_mono_pairs(Family(2, [0, 3]), 0b00), 1)


class TestMinimiser(unittest.TestCase):

    def test_exhaustive(self):
        value, witness = min_edges_over_families(ComparabilityGraph(2), 2)
        self.assertEqual(value, 0)
        self.assertEqual(list(witness), [1, 2])

    def test_random_is_seeded(self):
        g = ComparabilityGraph(4)
        a = min_edges_over_families(g, 8, RANDOM, trials=3, seed=11)
        b = min_edges_over_families(g, 8, RANDOM, trials=3, seed=11)
        self.assertEqual(a, b)
        self.assertGreaterEqual(a[0], 6)

    def test_validation(self):
        g = ComparabilityGraph(2)
        with self.assertRaises(ParameterError):
            minimize_over_families(g, 5, lambda b: 0)
        with self.assertRaises(ParameterError):
            minimize_over_families(g, 1, lambda b: 0, mode="annealing")

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            min_edges_over_families(ComparabilityGraph(5), 12,
                                    budget=EnumBudget(max_nodes_expanded=1000))


class TestKleitman(unittest.TestCase):

    def test_small_cases_attain_equality(self):
        for n, x in ((2, 1), (3, 1), (3, 2)):
            check = check_kleitman(n, x)
            self.assertTrue(check.passed, (n, x))
            self.assertEqual(check.observed_min, check.bound)
            self.assertTrue(check.extra["equality_attained"], (n, x))

    def test_n4(self):
        check = check_kleitman(4, 2)
        self.assertEqual(check.bound, 6)
        self.assertEqual(check.observed_min, 6)
        self.assertEqual(check.size, 8)

    def test_random_mode(self):
        check = check_kleitman(4, 2, mode=RANDOM, trials=4, seed=3)
        self.assertTrue(check.passed)
        self.assertEqual(check.mode, RANDOM)
        self.assertNotIn("equality_attained", check.extra)

    def test_out_of_range(self):
        with self.assertRaises(ParameterError):
            check_kleitman(3, -1)
        with self.assertRaises(ParameterError):
            check_kleitman(2, 3)

    def test_to_dict(self):
        d = check_kleitman(2, 1).to_dict()
        self.assertEqual(d["lemma"], "kleitman")
        self.assertEqual(d["bound"], "2")
        self.assertTrue(d["pass"])
        self.assertEqual(d["mode"], EXHAUSTIVE)


class TestOtherChecks(unittest.TestCase):

    def test_hamming_n4(self):
        # two words at distance >= 3 from each other is the most P(4) allows
        check = check_hamming(4, 1, 0)
        self.assertEqual(check.size, 4)
        self.assertEqual(check.bound, 2)
        self.assertEqual(check.observed_min, 2)
        self.assertTrue(check.passed)

    def test_hamming_degree(self):
        check = check_hamming_degree(3, 1, 4)
        self.assertEqual(check.observed_min, 2)
        self.assertEqual(check.bound, Fraction(3, 5))
        self.assertTrue(check.passed)
        with self.assertRaises(ParameterError):
            check_hamming_degree(3, 1, 3)

    def test_tilt(self):
        check = check_tilt(4, 1, 2, 1)
        self.assertTrue(check.passed)
        self.assertEqual(check.bound, max(0, check.size - check.extra["largest_tilted_family"]))

    def test_tilt_reports_reference_count(self):
        # five sets of P(3) avoid every tilted pair, more than the reference 3
        check = check_tilt(3, 1, 2, 2)
        self.assertEqual(check.extra["largest_tilted_family"], 5)
        self.assertEqual(check.observed_min, 0)
        self.assertTrue(check.passed)
        self.assertFalse(check.extra["reference_holds"])
        self.assertEqual(check.extra["reference_excess"], -2)
        self.assertTrue(check_tilt(3, 1, 2, 0).extra["reference_holds"])

    def test_transport(self):
        check = check_transport(5, 2, 1, 0)
        self.assertEqual(check.extra["H"], Fraction(5, 2))
        self.assertEqual(check.size, 3)
        self.assertEqual(check.bound, 1)
        self.assertTrue(check.passed)

    def test_mono(self):
        check = check_mono(3, 0b001, 1)
        self.assertTrue(check.passed)
        self.assertEqual(check.extra["conjectured_bound"], 2)

    def test_claim_cd(self):
        check = check_claim_cd(3, 1)
        self.assertEqual(check.bound, 1)
        self.assertEqual(check.observed_min, 1)
        self.assertTrue(check.passed)
        self.assertTrue(check_claim_cd(2, 0).passed)

    def test_prop64(self):
        for x in (1, 2):
            check = check_prop64(4, 1, x)
            self.assertTrue(check.passed, x)
            self.assertGreaterEqual(check.observed_min, x)
        with self.assertRaises(ParameterError):
            check_prop64(4, 3, 1)


class TestChains(unittest.TestCase):

    def test_bad_pairs(self):
        scd = build_scd(2)
        self.assertEqual(scd_bad_pairs(Family(2, [0, 1, 3]), scd), 3)
        self.assertEqual(scd_bad_pairs(Family(2, [1, 2]), scd), 0)

    def test_bad_pairs_rejects_wrong_ground(self):
        with self.assertRaises(ParameterError):
            scd_bad_pairs(Family(3, [1]), build_scd(2))

    def test_pigeonhole(self):
        check = check_scd_pigeonhole(Family.full(3), permutations=5)
        # chains of lengths 4, 2, 2
        self.assertEqual(check.observed_min, 8)
        self.assertTrue(check.passed)

    def test_top_layers(self):
        value, family = top_layer_min_disjoint(3, 4)
        self.assertEqual(value, 0)
        self.assertEqual(list(family), [3, 5, 6, 7])
        value, _ = top_layer_min_disjoint(3, 5)
        self.assertEqual(value, 1)

    def test_tilted_chain_hits(self):
        self.assertEqual(tilted_chain_hits(Family.full(6), 1, 2, 0, 4, 0), 2)


class TestSweeps(unittest.TestCase):

    def test_pigeonhole_every_family_n3(self):
        sweep = scd_pigeonhole_sweep(3, permutations=50)
        # C(8,3) + C(8,4) + ... + C(8,8)
        self.assertEqual(len(sweep), 219)
        self.assertEqual([c for c in sweep if not c.passed], [])

    def test_pigeonhole_sampled_n4(self):
        sweep = scd_pigeonhole_sweep(4, permutations=50, seed=1, samples=3)
        self.assertEqual(len(sweep), 11 * 3)
        self.assertEqual(sorted({c.size for c in sweep}), list(range(6, 17)))
        self.assertTrue(all(c.passed for c in sweep))

    def test_hamming_n3_exhaustive(self):
        for x in range(1, 5):
            check = check_hamming(3, 1, x)
            self.assertEqual(check.bound, -(-3 * x // 2), x)
            self.assertTrue(check.passed, x)

    def test_hamming_n4_random(self):
        for x in range(1, 4):
            self.assertTrue(check_hamming(4, 1, x, RANDOM, trials=10, seed=x).passed, x)

    def test_degree_n3_exhaustive(self):
        for size in range(4, 9):
            self.assertTrue(check_hamming_degree(3, 1, size).passed, size)

    def test_degree_n4_random(self):
        for size in range(8, 13):
            check = check_hamming_degree(4, 1, size, RANDOM, trials=10, seed=size)
            self.assertTrue(check.passed, size)

    def test_transport(self):
        for x in (0, 1):
            self.assertTrue(check_transport(5, 2, 1, x).passed, x)
        for x in range(0, 4):
            check = check_transport(6, 2, 1, x, RANDOM, trials=5, seed=x)
            self.assertTrue(check.passed, x)

    def test_claim_cd_small_n(self):
        cases = [(n, x) for n in (2, 3) for x in range(0, (1 << (n - 1)) + 1)]
        cases += [(4, x) for x in range(0, 4)]
        for n, x in cases:
            check = check_claim_cd(n, x)
            self.assertTrue(check.passed, (n, x))
            # the top-layer family is itself a candidate
            self.assertEqual(check.observed_min, check.bound, (n, x))


if __name__ == "__main__":
    unittest.main()
