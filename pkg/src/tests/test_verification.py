"""
test_verification.py
====================

Tests for src/tools/verification.py.

Covers:
  - has_errors / issues_summary on hand-made issue lists
  - issue ordering (ERROR first, then check, then code)
  - run_verification on a tiny profile: passing checks, --only filtering,
    unknown check names as WARNINGs, budget overruns as ERRORs
  - randomized Kleitman over every valid x at n = 4, equality on the layer range
  - the supersaturation sweep check: pigeonhole counts and per-lemma rows
  - the random-model calibration window passes and fails as configured
  - every check in the shipped quick profile has a CHECKS entry
"""

import os
import sys
import unittest

_REPO_ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.insert(0, _REPO_ROOT)

from src.core.budget import EnumBudget
from src.core.experiment_config import VerificationProfile, load_profile
from src.tools.verification import (
    CHECKS,
    ERROR,
    INFO,
    WARNING,
    _issue,
    _sort_issues,
    has_errors,
    issues_summary,
    run_verification,
)


def _tiny_profile(grid):
    return VerificationProfile({"profile_id": "tiny", "seed": 2,
                                "budget": {"max_vertices": 64, "max_nodes_expanded": 200000},
                                "grid": grid})


class TestIssueHelpers(unittest.TestCase):

    def test_summary(self):
        self.assertEqual(issues_summary([]), "No issues found")
        issues = [_issue(ERROR, "A", "x"), _issue(INFO, "B", "y"), _issue(ERROR, "C", "z")]
        self.assertEqual(issues_summary(issues), "2 ERROR, 1 INFO")
        self.assertTrue(has_errors(issues))
        self.assertFalse(has_errors([_issue(WARNING, "W", "w")]))

    def test_sort(self):
        issues = [_issue(INFO, "Z", "", "a"), _issue(WARNING, "Y", "", "b"),
                  _issue(ERROR, "X", "", "c"), _issue(ERROR, "A", "", "c")]
        self.assertEqual([i["code"] for i in _sort_issues(issues)], ["A", "X", "Y", "Z"])


class TestRunVerification(unittest.TestCase):

    def test_small_checks_pass(self):
        profile = _tiny_profile({
            "antichains": {"n_max": 3},
            "scd": {"n_max": 5},
            "skew_construction": {"n": [2]},
            "two_coloured": {"n_max": 2},
        })
        result = run_verification(profile)
        self.assertEqual(result["profile"], "tiny")
        self.assertFalse(has_errors(result["issues"]), result["issues"])
        self.assertTrue(all(r["passed"] for r in result["checks"]))
        details = {r["check"]: r["details"] for r in result["checks"]}
        self.assertEqual(details["antichains"]["counts"], {"0": "2", "1": "3", "2": "6", "3": "20"})
        self.assertEqual(details["skew_construction"]["families"], {"2": "6"})
        self.assertEqual(details["two_coloured"]["colourings_checked"], 2 + 4)

    def test_random_kleitman_covers_every_x(self):
        profile = _tiny_profile({"kleitman": {"exhaustive_n": [], "random_n": 4, "trials": 50}})
        result = run_verification(profile)
        self.assertFalse(has_errors(result["issues"]), result["issues"])
        rows = result["checks"][0]["details"]["checks"]
        # 1 <= x <= 2^4 - binomial(4, 2)
        self.assertEqual([r["params"]["x"] for r in rows], list(range(1, 11)))
        for r in rows[:4]:
            self.assertEqual(r["observed_min"], r["bound"])
            self.assertEqual(r["layer_witness_pairs"], r["bound"])

    def test_lemma_sweep(self):
        profile = _tiny_profile({"lemma_sweep": {
            "pigeonhole_n_max": 3, "permutations": 50,
            "hamming_x": [1, 2, 3, 4], "degree_sizes": [4, 5, 6],
            "random_n": 4, "hamming_random_x": [1], "degree_random_sizes": [8], "trials": 5,
            "transport": [[5, 2, 1, [0, 1]]],
            "claim_cd_n_max": 3, "claim_cd": [[4, [0, 1, 2, 3]]],
        }})
        result = run_verification(profile)
        self.assertFalse(has_errors(result["issues"]), result["issues"])
        details = result["checks"][0]["details"]
        self.assertEqual(details["scd_pigeonhole"]["3"], {"families": 219, "violations": 0})
        self.assertEqual(details["scd_pigeonhole"]["2"], {"families": 11, "violations": 0})
        lemmas = [r["lemma"] for r in details["checks"]]
        self.assertEqual(lemmas.count("hamming"), 5)
        self.assertEqual(lemmas.count("hamming-degree"), 4)
        self.assertEqual(lemmas.count("transport"), 2)
        # n = 2: x in 0..2, n = 3: x in 0..4, n = 4: x in 0..3
        self.assertEqual(lemmas.count("claim-cd"), 3 + 5 + 4)

    def test_random_model_calibration(self):
        def run(window):
            return run_verification(_tiny_profile({"random_model": {
                "monte_carlo": {"n": 3, "t": 1, "p": "1/2", "trials": 2},
                "calibration": {"n": 4, "t": 1, "p": "1", "trials": 1, "mean_ratio": window},
                "n": [],
            }}))

        result = run(["1/2", "3/4"])
        self.assertFalse(has_errors(result["issues"]), result["issues"])
        self.assertEqual(result["checks"][0]["details"]["calibration"]["mean_ratio"], "1/2")
        codes = [i["code"] for i in run(["3/5", "3/4"])["issues"]]
        self.assertEqual(codes, ["MONTE_CARLO_CALIBRATION"])

    def test_only(self):
        profile = _tiny_profile({"antichains": {"n_max": 2}, "scd": {"n_max": 3}})
        result = run_verification(profile, only=["scd"])
        self.assertEqual([r["check"] for r in result["checks"]], ["scd"])

    def test_unknown_check(self):
        result = run_verification(_tiny_profile({"nosuch": {}}))
        self.assertEqual(len(result["issues"]), 1)
        issue = result["issues"][0]
        self.assertEqual((issue["level"], issue["code"]), (WARNING, "UNKNOWN_CHECK"))
        self.assertFalse(has_errors(result["issues"]))

    def test_budget_overrun_is_an_error(self):
        profile = _tiny_profile({"containers": {
            "graphs": ["comparability:n=7"],
            "schedules": [{"delta": "3,1", "switch": "6"}]}})
        result = run_verification(profile)
        self.assertEqual(result["issues"][0]["code"], "BUDGET_EXCEEDED")
        self.assertFalse(result["checks"][0]["passed"])
        self.assertEqual(result["rows"], [{"check": "containers", "passed": False}])

    def test_single_stage_grid_warns(self):
        profile = _tiny_profile({"containers": {"graphs": ["comparability:n=2"]}})
        result = run_verification(profile, EnumBudget())
        self.assertEqual([i["code"] for i in result["issues"]], ["NO_TWO_STAGE"])
        self.assertTrue(result["checks"][0]["passed"])

    def test_quick_profile_names_known_checks(self):
        self.assertEqual(set(load_profile("quick").checks()) - set(CHECKS), set())


if __name__ == "__main__":
    unittest.main()
