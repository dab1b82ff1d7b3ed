"""
test_config.py
==============

Tests for src/core/experiment_config.py and src/core/budget.py.

Covers:
  - ExperimentConfig: round trip, sorted params, validation, threads and
    output left out of the reproducible echo
  - VerificationProfile: comment stripping, sections, enabled flags
  - shipped profiles (quick, desk) load and name only known checks
  - EnumBudget: defaults, overrides, validation, tracker limits
"""

import json
import os
import sys
import tempfile
import unittest

_REPO_ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.insert(0, _REPO_ROOT)

from src.core.budget import DEFAULT_MAX_NODES, EnumBudget
from src.core.errors import BudgetExceeded, ParameterError
from src.core.experiment_config import (
    ExperimentConfig,
    VerificationProfile,
    list_available_profiles,
    load_default_profile,
    load_profile,
)
from src.tools.verification import CHECKS


class TestExperimentConfig(unittest.TestCase):

    def test_round_trip(self):
        cfg = ExperimentConfig("count", {"graph": "comparability:n=3", "mode": "max"},
                               EnumBudget(max_vertices=32), seed=4, threads=3,
                               output="out.json", fmt="csv")
        again = ExperimentConfig.from_dict(cfg.to_full_dict())
        self.assertEqual(again, cfg)

    def test_echo_omits_threads_and_output(self):
        d = ExperimentConfig("count", {"b": 1, "a": 2}, threads=4, output="x").to_dict()
        self.assertNotIn("threads", d)
        self.assertNotIn("output", d)
        self.assertEqual(list(d["params"]), ["a", "b"])

    def test_validation(self):
        with self.assertRaises(ValueError):
            ExperimentConfig("count", fmt="xml")
        with self.assertRaises(ValueError):
            ExperimentConfig("count", threads=0)

    def test_from_dict_strips_comments(self):
        cfg = ExperimentConfig.from_dict({"_note": "x", "command": "bounds"})
        self.assertEqual(cfg.command, "bounds")
        self.assertEqual(cfg.budget, EnumBudget())


class TestProfiles(unittest.TestCase):

    def test_sections(self):
        profile = VerificationProfile({
            "profile_id": "t",
            "_comment": "ignored",
            "budget": {"max_nodes_expanded": 100, "_why": "small"},
            "grid": {"scd": {"n_max": 3, "_c": 1},
                     "codes": {"enabled": False},
                     "_hidden": {}},
        })
        self.assertEqual(profile.budget.max_nodes_expanded, 100)
        self.assertEqual(profile.section("scd"), {"n_max": 3})
        self.assertEqual(profile.section("missing"), {})
        self.assertEqual(profile.checks(), ["scd"])
        self.assertFalse(profile.enabled("codes"))

    def test_shipped_profiles(self):
        self.assertTrue({"quick", "desk"} <= set(list_available_profiles()))
        for name in ("quick", "desk"):
            profile = load_profile(name)
            self.assertEqual(profile.profile_id, name)
            self.assertTrue(set(profile.checks()) <= set(CHECKS), name)
        self.assertEqual(load_default_profile().profile_id, "desk")

    def test_quick_is_smaller(self):
        quick, desk = load_profile("quick"), load_profile("desk")
        self.assertLess(quick.budget.max_nodes_expanded, desk.budget.max_nodes_expanded)
        self.assertEqual(set(quick.checks()), set(desk.checks()))

    def test_load_by_path(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "mine.json")
            with open(path, "w") as fh:
                json.dump({"profile_id": "mine", "seed": 3, "grid": {}}, fh)
            profile = load_profile(path)
            self.assertEqual(profile.seed, 3)
            self.assertEqual(list_available_profiles(tmp), ["mine"])

    def test_missing(self):
        with self.assertRaises(FileNotFoundError):
            load_profile("no_such_profile")
        self.assertEqual(list_available_profiles("/nonexistent/dir"), [])


class TestBudget(unittest.TestCase):

    def test_defaults_and_overrides(self):
        b = EnumBudget()
        self.assertEqual(b.max_nodes_expanded, DEFAULT_MAX_NODES)
        c = b.with_overrides(timeout=5)
        self.assertEqual(c.timeout, 5)
        self.assertEqual(c.max_vertices, b.max_vertices)
        self.assertEqual(EnumBudget.from_dict(c.to_dict()), c)

    def test_validation(self):
        with self.assertRaises(ParameterError):
            EnumBudget(max_vertices=0)

    def test_checks(self):
        b = EnumBudget(max_vertices=4, max_nodes_expanded=3)
        b.check_vertices(4, "x")
        with self.assertRaises(BudgetExceeded):
            b.check_vertices(5, "x")
        with self.assertRaises(BudgetExceeded):
            b.check_candidates(4, "x")

    def test_tracker_partial(self):
        tracker = EnumBudget(max_nodes_expanded=2).tracker("t")
        tracker.tick()
        tracker.tick()
        with self.assertRaises(BudgetExceeded) as ctx:
            tracker.tick(lambda: {"done": 2})
        self.assertEqual(ctx.exception.partial, {"done": 2})
        self.assertEqual(ctx.exception.nodes, 3)


if __name__ == "__main__":
    unittest.main()
