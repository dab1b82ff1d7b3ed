"""
test_main.py
============

Tests for the command line in src/main.py, driven through run(argv, stream).

Covers:
  - count: independent, max and maximal modes on P(3)
  - bounds: exact rationals for hamming, transport and katona
  - containers: --verify, --family and the default enumeration; CSV output
  - supersat, random-katona and construct sub-commands
  - exit codes: 0 ok, 1 usage / budget / missing file, 2 failed check
  - reports are byte-identical across --threads and never echo --out
  - verify-all with a profile path and --only; default level and help text
  - random-katona at n = 10 fits the default vertex budget
"""

import io
import json
import os
import sys
import tempfile
import unittest

_REPO_ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.insert(0, _REPO_ROOT)

from src.main import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK, level_help, resolve_profile, run


def _run(argv):
    buf = io.StringIO()
    code = run(argv, stream=buf)
    return code, buf.getvalue()


def _run_json(argv):
    code, text = _run(argv)
    return code, json.loads(text) if text else None


def _write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


class TestCount(unittest.TestCase):

    def test_antichains(self):
        code, report = _run_json(["count", "--graph", "comparability:n=3"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["count"], "20")
        self.assertEqual(report["tool"], "container-lab")
        self.assertEqual(report["config"]["command"], "count")
        self.assertEqual(report["config"]["params"]["graph"], "comparability:n=3")

    def test_max_and_maximal(self):
        _, report = _run_json(["count", "--graph", "comparability:n=3", "--mode", "max"])
        self.assertEqual(report["count"], "3")
        self.assertEqual(len(report["witness"]["members"]), 3)
        _, report = _run_json(["count", "--graph", "comparability:n=3", "--mode", "maximal"])
        self.assertEqual(report["count"], "7")

    def test_bad_graph_spec(self):
        code, text = _run(["count", "--graph", "cube:n=3"])
        self.assertEqual(code, EXIT_ERROR)
        self.assertEqual(text, "")

    def test_budget(self):
        code, _ = _run(["count", "--graph", "comparability:n=5", "--budget-nodes", "5"])
        self.assertEqual(code, EXIT_ERROR)
        code, _ = _run(["count", "--graph", "comparability:n=7", "--max-vertices", "64"])
        self.assertEqual(code, EXIT_ERROR)


class TestUsage(unittest.TestCase):

    def test_unknown_command(self):
        self.assertEqual(_run(["frobnicate"])[0], EXIT_ERROR)

    def test_unknown_flag(self):
        self.assertEqual(_run(["count", "--graph", "comparability:n=2", "--bogus"])[0],
                         EXIT_ERROR)

    def test_no_command(self):
        self.assertEqual(_run([])[0], EXIT_ERROR)

    def test_bad_threads(self):
        self.assertEqual(_run(["bounds", "--family", "hamming", "--n", "7", "--t", "1",
                               "--threads", "0"])[0], EXIT_ERROR)

    def test_missing_profile(self):
        self.assertEqual(_run(["bounds", "--family", "hamming", "--n", "7", "--t", "1",
                               "--config", "no_such_profile"])[0], EXIT_ERROR)


class TestBounds(unittest.TestCase):

    def test_hamming(self):
        code, report = _run_json(["bounds", "--family", "hamming", "--n", "7", "--t", "1"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["bound"]["num"], "16")
        self.assertEqual(report["bound"]["den"], "1")

    def test_transport(self):
        _, report = _run_json(["bounds", "--family", "transport",
                               "--n", "4", "--k", "2", "--d", "3"])
        self.assertEqual((report["bound"]["num"], report["bound"]["den"]), ("3", "2"))
        self.assertAlmostEqual(report["bound"]["approx"], 1.5)

    def test_katona(self):
        _, report = _run_json(["bounds", "--family", "katona", "--n", "4", "--t", "1"])
        self.assertEqual(report["bound"]["num"], "8")

    def test_missing_parameter(self):
        self.assertEqual(_run(["bounds", "--family", "katona", "--n", "4"])[0], EXIT_ERROR)
        self.assertEqual(_run(["bounds", "--family", "transport", "--n", "4", "--k", "2"])[0],
                         EXIT_ERROR)

    def test_out_of_range(self):
        self.assertEqual(_run(["bounds", "--family", "katona", "--n", "4", "--t", "9"])[0],
                         EXIT_ERROR)


class TestContainers(unittest.TestCase):

    def test_verify(self):
        code, report = _run_json(["containers", "--graph", "comparability:n=2", "--verify"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["n_independent_sets"], "6")
        self.assertTrue(report["covered"])
        self.assertEqual(report["violations"], [])

    def test_two_stage_verify(self):
        code, report = _run_json(["containers", "--graph", "hamming:n=3,t=1",
                                  "--delta", "3,1", "--switch", "6", "--verify"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(report["schedule"]["stages"]), 2)

    def test_bad_schedule(self):
        code, _ = _run(["containers", "--graph", "comparability:n=2", "--delta", "1,3",
                        "--switch", "4", "--verify"])
        self.assertEqual(code, EXIT_ERROR)

    def test_enumerate(self):
        code, report = _run_json(["containers", "--graph", "comparability:n=2", "--max-s", "2"])
        self.assertEqual(code, EXIT_OK)
        self.assertGreaterEqual(report["n_containers"], 1)
        self.assertEqual(sum(r["fingerprints"] for r in report["rows"]),
                         report["n_fingerprints"])

    def test_family_run(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = _write_text(os.path.join(tmp, "a.fam"), "n=2\n1\n2\n")
            code, report = _run_json(["containers", "--graph", "comparability:n=2",
                                      "--family", path])
            self.assertEqual(code, EXIT_OK)
            self.assertIn("fingerprint", report["run"])

            bad = _write_text(os.path.join(tmp, "b.fam"), "n=2\n1\n3\n")
            self.assertEqual(_run(["containers", "--graph", "comparability:n=2",
                                   "--family", bad])[0], EXIT_ERROR)
            self.assertEqual(_run(["containers", "--graph", "comparability:n=2",
                                   "--family", os.path.join(tmp, "none.fam")])[0], EXIT_ERROR)

    def test_csv(self):
        code, text = _run(["containers", "--graph", "comparability:n=2", "--max-s", "2",
                           "--format", "csv"])
        self.assertEqual(code, EXIT_OK)
        header = text.splitlines()[0].split(",")
        self.assertEqual(header, ["container_size", "fingerprints"])


class TestSupersat(unittest.TestCase):

    def test_kleitman(self):
        code, report = _run_json(["supersat", "--lemma", "kleitman", "--n", "3", "--x", "1"])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(report["pass"])
        self.assertEqual(report["lemma"], "kleitman")

    def test_hamming_needs_t(self):
        code, _ = _run(["supersat", "--lemma", "hamming", "--n", "4", "--x", "0"])
        self.assertEqual(code, EXIT_ERROR)

    def test_hamming_fraction(self):
        code, report = _run_json(["supersat", "--lemma", "hamming", "--n", "4", "--t", "1",
                                  "--x", "0"])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(report["pass"])


class TestRandomKatona(unittest.TestCase):

    def test_full_lattice(self):
        code, report = _run_json(["random-katona", "--n", "4", "--t", "1", "--p", "1",
                                  "--trials", "2", "--seed", "3"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["K"], "8")
        self.assertEqual(report["mean_ratio"]["num"], "1")
        self.assertEqual(report["mean_ratio"]["den"], "2")
        self.assertEqual(len(report["rows"]), 2)

    def test_n10_runs_under_default_budget(self):
        code, report = _run_json(["random-katona", "--n", "10", "--t", "1", "--p", "1/2",
                                  "--trials", "2", "--seed", "1"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["K"], "512")
        self.assertEqual(len(report["rows"]), 2)

    def test_threads_and_out_do_not_change_bytes(self):
        argv = ["random-katona", "--n", "6", "--t", "1", "--p", "1/2", "--trials", "3",
                "--seed", "9"]
        with tempfile.TemporaryDirectory() as tmp:
            a, b = os.path.join(tmp, "a.json"), os.path.join(tmp, "x", "b.json")
            self.assertEqual(run(argv + ["--out", a]), EXIT_OK)
            self.assertEqual(run(argv + ["--out", b, "--threads", "3"]), EXIT_OK)
            with open(a, "rb") as fa, open(b, "rb") as fb:
                self.assertEqual(fa.read(), fb.read())
            with open(a, encoding="utf-8") as fh:
                config = json.load(fh)["config"]
            self.assertNotIn("out", config["params"])
            self.assertNotIn("threads", config)


class TestConstruct(unittest.TestCase):

    def test_good_triples(self):
        code, report = _run_json(["construct", "--what", "good-triples", "--n", "4", "--k", "2"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["count"], "6")
        self.assertEqual(report["expected_count"], "6")
        self.assertEqual(report["what"], "good-triples")

    def test_needs_n(self):
        self.assertEqual(_run(["construct", "--what", "good-triples", "--k", "2"])[0],
                         EXIT_ERROR)

    def test_c78(self):
        code, report = _run_json(["construct", "--what", "c78", "--n", "2"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["generated"], "6")
        self.assertEqual(report["not_skew"], "0")

    def test_fT_writes_family(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "ft.fam")
            code, report = _run_json(["construct", "--what", "fT", "--n", "5", "--k", "2",
                                      "--family-out", out])
            self.assertEqual(code, EXIT_OK)
            self.assertTrue(os.path.exists(out))
            self.assertEqual(len(report["family"]["members"]), 6)

    def test_matching_extensions(self):
        code, report = _run_json(["construct", "--what", "matching", "--n", "4", "--k", "1",
                                  "--extend"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["transversals"], report["distinct_maximal_extensions"])

    def test_isp_check_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            bad = _write_text(os.path.join(tmp, "bad.pairs"), "N=2\n1,1\n")
            code, report = _run_json(["construct", "--what", "isp-check", "--n", "2",
                                      "--pairs", bad])
            self.assertEqual(code, EXIT_CHECK_FAILED)
            self.assertFalse(report["is_isp"])
            good = _write_text(os.path.join(tmp, "good.pairs"), "N=2\n1,2\n2,1\n")
            self.assertEqual(_run(["construct", "--what", "isp-check", "--n", "2",
                                   "--pairs", good])[0], EXIT_OK)

    def test_skew_check_search(self):
        code, report = _run_json(["construct", "--what", "skew-check", "--N", "2"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(report["max_size"], 2)


class TestVerifyAll(unittest.TestCase):

    def _profile(self, tmp, grid):
        path = os.path.join(tmp, "tiny.json")
        with open(path, "w") as fh:
            json.dump({"profile_id": "tiny", "seed": 1,
                       "budget": {"max_vertices": 64, "max_nodes_expanded": 200000},
                       "grid": grid}, fh)
        return path

    def test_passing_profile(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self._profile(tmp, {"antichains": {"n_max": 3}, "scd": {"n_max": 5}})
            code, report = _run_json(["verify-all", "--level", path])
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(report["profile"], "tiny")
            self.assertEqual([r["check"] for r in report["rows"]], ["antichains", "scd"])
            self.assertEqual(report["summary"], "No issues found")

    def test_only(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self._profile(tmp, {"antichains": {"n_max": 3}, "scd": {"n_max": 5}})
            _, report = _run_json(["verify-all", "--level", path, "--only", "scd"])
            self.assertEqual([r["check"] for r in report["rows"]], ["scd"])

    def test_budget_failure_exits_two(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self._profile(tmp, {"containers": {"graphs": ["comparability:n=7"]}})
            code, report = _run_json(["verify-all", "--level", path])
            self.assertEqual(code, EXIT_CHECK_FAILED)
            self.assertEqual(report["issues"][0]["code"], "BUDGET_EXCEEDED")

    def test_missing_level(self):
        self.assertEqual(_run(["verify-all", "--level", "no_such_profile"])[0], EXIT_ERROR)

    def test_level_defaults_and_help(self):
        self.assertEqual(resolve_profile(None).profile_id, "desk")
        self.assertEqual(resolve_profile("quick").profile_id, "quick")
        self.assertIn("desk", level_help())
        self.assertIn("quick", level_help())


if __name__ == "__main__":
    unittest.main()
