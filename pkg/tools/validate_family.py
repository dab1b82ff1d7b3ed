#!/usr/bin/env python3
"""
validate_family.py
==================

Validate a family file against a graph spec before feeding it to the
container algorithm or a report.  Prints ERROR / WARNING / INFO messages.

Usage::

    # Is the family independent in the graph?
    python tools/validate_family.py --family src/examples/hamming_7_4.fam --graph hamming:n=7,t=1

    # Also require pairwise Hamming distance >= 3 and a perfect 1-code
    python tools/validate_family.py --family code.fam --graph hamming:n=7,t=1 --code 3 --perfect 1

    # Fail with exit-code 1 if any ERRORs (useful in CI)
    python tools/validate_family.py --family code.fam --graph hamming:n=7,t=1 --strict

    # JSON output for machine consumption
    python tools/validate_family.py --family code.fam --graph hamming:n=7,t=1 --json
"""

import argparse
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))


def _show(member) -> str:
    return f"{member:#x}" if isinstance(member, int) else str(member)


def validate_family(family, graph, code_distance=None, perfect_t=None):
    """Return issue dicts for ``family`` checked against ``graph``."""
    from src.tools.codes import hamming_bound, is_code, is_perfect
    from src.tools.verification import ERROR, INFO, WARNING, _issue, _sort_issues

    issues = []
    if family.ground_n != graph.n:
        issues.append(_issue(ERROR, "GROUND_MISMATCH",
                             f"family lives on [{family.ground_n}], graph on [{graph.n}]"))
        return issues
    if len(family) == 0:
        issues.append(_issue(WARNING, "EMPTY_FAMILY", "family has no members"))

    missing = [m for m in family if not graph.has_vertex(m)]
    if missing:
        issues.append(_issue(ERROR, "NOT_A_VERTEX",
                             f"{len(missing)} member(s) are not vertices of {graph.spec()}"))
    else:
        edge = graph.find_edge(family)
        if edge is not None:
            issues.append(_issue(ERROR, "NOT_INDEPENDENT",
                                 f"members {_show(edge[0])} and {_show(edge[1])} are adjacent"))
        else:
            issues.append(_issue(INFO, "INDEPENDENT",
                                 f"{len(family)} members, independent in {graph.spec()}"))

    if code_distance is not None and not is_code(family, code_distance):
        issues.append(_issue(ERROR, "CODE_DISTANCE",
                             f"some pair is closer than Hamming distance {code_distance}"))
    if perfect_t is not None:
        if is_perfect(family, perfect_t):
            issues.append(_issue(INFO, "PERFECT", f"perfect {perfect_t}-error-correcting code"))
        else:
            issues.append(_issue(ERROR, "NOT_PERFECT",
                                 f"not perfect for t={perfect_t} "
                                 f"(size {len(family)}, H = {hamming_bound(family.ground_n, perfect_t)})"))
    return _sort_issues(issues)


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Validate a family file against a graph spec.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--family",  metavar="FILE", required=True,
                        help="Family file (n=... header, one hex mask per line).")
    parser.add_argument("--graph",   metavar="SPEC", required=True,
                        help="Graph spec, e.g. hamming:n=7,t=1.")
    parser.add_argument("--code",    type=int, metavar="D",
                        help="Also require pairwise Hamming distance >= D.")
    parser.add_argument("--perfect", type=int, metavar="T",
                        help="Also require a perfect T-error-correcting code.")
    parser.add_argument("--strict",  action="store_true",
                        help="Exit with code 1 if any ERROR-level issues found.")
    parser.add_argument("--json",    action="store_true",
                        help="Output validation results as JSON instead of text.")

    args = parser.parse_args()

    from src.core.errors import ContainerLabError
    from src.core.graphs import parse_graph_spec
    from src.tools.verification import has_errors, issues_summary
    from src.utils.file_io import load_family

    if not os.path.exists(args.family):
        print(f"[validate] ERROR: Family file not found: {args.family}", file=sys.stderr)
        return 1
    try:
        family = load_family(args.family)
        graph = parse_graph_spec(args.graph)
    except ContainerLabError as exc:
        print(f"[validate] ERROR: {exc}", file=sys.stderr)
        return 1

    issues = validate_family(family, graph, args.code, args.perfect)
    summary = issues_summary(issues)

    if args.json:
        print(json.dumps({"summary": summary, "issues": issues}, indent=2))
    else:
        print(f"\n=== Family Validation: {summary} ===\n")
        for iss in issues:
            icon = {"ERROR": "✗", "WARNING": "⚠", "INFO": "ℹ"}.get(iss["level"], "?")
            print(f"  {icon} [{iss['level']}] {iss['code']}: {iss['message']}")

    if args.strict and has_errors(issues):
        if not args.json:
            print("\n[validate] Exiting with code 1 (errors found).")
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
