"""
test_tools.py
=============

Tests for the CLI tool in tools/.

Covers:
  - validate_family.py:
      validate_family() on the shipped Hamming code: independent, a
      distance-3 code and perfect
      ground-set mismatch and adjacent members are ERRORs
      non-vertices of a layer graph are reported
      main(): exit 0 without --strict, exit 1 with --strict on errors
      missing file exits 1 with the message on stderr
      --json output is parseable JSON
"""

import io
import importlib.util
import json
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stdout, redirect_stderr

_REPO_ROOT = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", ".."))
sys.path.insert(0, _REPO_ROOT)

from src.core.graphs import BnkGraph, parse_graph_spec
from src.core.lattice import Family
from src.tools.codes import hamming_7_4_code

_HAMMING_FAM = os.path.join(_REPO_ROOT, "src", "examples", "hamming_7_4.fam")


def _load_validate_mod():
    spec = importlib.util.spec_from_file_location(
        "validate_family",
        os.path.join(_REPO_ROOT, "tools", "validate_family.py"))
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def _codes(issues):
    return [i["code"] for i in issues]


class TestValidateFamilyFunction(unittest.TestCase):

    def setUp(self):
        self.mod = _load_validate_mod()
        self.graph = parse_graph_spec("hamming:n=7,t=1")

    def test_hamming_code(self):
        issues = self.mod.validate_family(hamming_7_4_code(), self.graph,
                                          code_distance=3, perfect_t=1)
        self.assertEqual(sorted(_codes(issues)), ["INDEPENDENT", "PERFECT"])
        self.assertTrue(all(i["level"] == "INFO" for i in issues))

    def test_ground_mismatch(self):
        issues = self.mod.validate_family(Family(3, [0, 7]), self.graph)
        self.assertEqual(_codes(issues), ["GROUND_MISMATCH"])

    def test_adjacent_members(self):
        issues = self.mod.validate_family(Family(7, [0, 1]), self.graph,
                                          code_distance=3, perfect_t=1)
        self.assertEqual(issues[0]["level"], "ERROR")
        self.assertIn("NOT_INDEPENDENT", _codes(issues))
        self.assertIn("CODE_DISTANCE", _codes(issues))
        self.assertIn("NOT_PERFECT", _codes(issues))

    def test_not_a_vertex(self):
        issues = self.mod.validate_family(Family(3, [0b111]), BnkGraph(3, 1))
        self.assertEqual(_codes(issues), ["NOT_A_VERTEX"])

    def test_empty_family(self):
        issues = self.mod.validate_family(Family(7, []), self.graph)
        self.assertIn("EMPTY_FAMILY", _codes(issues))


class TestValidateFamilyMain(unittest.TestCase):

    def _run(self, args):
        mod      = _load_validate_mod()
        old_argv = sys.argv
        sys.argv = ["validate_family.py"] + args
        try:
            with redirect_stdout(io.StringIO()), redirect_stderr(io.StringIO()):
                code = mod.main()
        except SystemExit as e:
            code = e.code
        finally:
            sys.argv = old_argv
        return code

    def _run_json(self, args):
        mod        = _load_validate_mod()
        stdout_buf = io.StringIO()
        stderr_buf = io.StringIO()
        old_argv   = sys.argv
        sys.argv   = ["v"] + args
        try:
            with redirect_stdout(stdout_buf), redirect_stderr(stderr_buf):
                try:
                    mod.main()
                except SystemExit:
                    pass
        finally:
            sys.argv = old_argv
        return stdout_buf.getvalue(), stderr_buf.getvalue()

    def _bad_family(self, tmp):
        path = os.path.join(tmp, "bad.fam")
        with open(path, "w") as fh:
            fh.write("n=7\n0\n1\n")
        return path

    def test_valid_family_exits_0(self):
        code = self._run(["--family", _HAMMING_FAM, "--graph", "hamming:n=7,t=1",
                          "--perfect", "1", "--strict"])
        self.assertEqual(code, 0)

    def test_strict_controls_exit_code(self):
        with tempfile.TemporaryDirectory() as tmp:
            bad = self._bad_family(tmp)
            self.assertEqual(self._run(["--family", bad, "--graph", "hamming:n=7,t=1"]), 0)
            self.assertEqual(self._run(["--family", bad, "--graph", "hamming:n=7,t=1",
                                        "--strict"]), 1)

    def test_missing_file(self):
        out, err = self._run_json(["--family", "/nonexistent/x.fam",
                                   "--graph", "hamming:n=7,t=1"])
        self.assertEqual(out, "")
        self.assertIn("not found", err)
        self.assertEqual(self._run(["--family", "/nonexistent/x.fam",
                                    "--graph", "hamming:n=7,t=1"]), 1)

    def test_bad_graph_spec(self):
        self.assertEqual(self._run(["--family", _HAMMING_FAM, "--graph", "cube:n=7"]), 1)

    def test_json_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            out, _ = self._run_json(["--family", self._bad_family(tmp),
                                     "--graph", "hamming:n=7,t=1", "--json", "--strict"])
        data = json.loads(out)
        self.assertIn("ERROR", data["summary"])
        self.assertEqual(data["issues"][0]["code"], "NOT_INDEPENDENT")


if __name__ == "__main__":
    unittest.main()
