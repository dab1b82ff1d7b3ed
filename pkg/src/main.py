#!/usr/bin/env python3
"""
Container Lab - Main Entry Point

Unified command line for the container algorithm, the enumeration oracles,
the supersaturation checks, the code bounds, the random Katona experiment,
the explicit constructions and the verify-all acceptance suite.

Exit codes:
    0  success
    1  usage error, budget exceeded, malformed or missing input file
    2  a check ran and found a violation

Usage::

    python -m src.main count --graph comparability:n=3
    python -m src.main bounds --family hamming --n 7 --t 1
    python -m src.main containers --graph hamming:n=4,t=1 --delta 3,1 --switch 6 --verify
    python -m src.main verify-all --level desk --out reports/desk.json
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from typing import Callable, Dict, List, Optional, Tuple

from src.core.budget import EnumBudget
from src.core.errors import BudgetExceeded, ContainerLabError, ParameterError
from src.core.experiment_config import (
    FORMATS,
    ExperimentConfig,
    list_available_profiles,
    load_default_profile,
    load_profile,
)
from src.utils.logging_setup import configure_logging

log = logging.getLogger("src.main")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2

# Flags that describe how a run is executed rather than what it computes.
_GLOBAL_KEYS = ("command", "config", "threads", "out", "format", "verbose", "timing",
                "budget_nodes", "timeout", "max_vertices", "seed")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so usage errors map to 1."""

    def error(self, message):
        raise ParameterError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# Commands.  Each returns (report body, passed).
# ---------------------------------------------------------------------------

def cmd_count(args, budget: EnumBudget) -> Tuple[dict, bool]:
    from src.core.graphs import parse_graph_spec
    from src.tools.enumeration import (
        count_independent_sets, count_maximal_independent_sets, max_independent_set,
    )

    graph = parse_graph_spec(args.graph)
    body = {"graph": graph.spec(), "mode": args.mode, "vertices": graph.num_vertices}
    if args.mode == "max":
        size, witness = max_independent_set(graph, budget)
        body["count"] = str(size)
        body["witness"] = witness.to_dict()
    else:
        fn = count_independent_sets if args.mode == "independent" else count_maximal_independent_sets
        value = fn(graph, budget)
        body["count"] = str(value)
        body["log2_count"] = math.log2(value) if value else None
    return body, True


def cmd_containers(args, budget: EnumBudget) -> Tuple[dict, bool]:
    from src.core.containers import (
        Schedule, container_upper_bound, distinct_containers, enumerate_containers,
        run_kw, verify_container_property,
    )
    from src.core.graphs import parse_graph_spec
    from src.utils.file_io import load_family

    graph = parse_graph_spec(args.graph)
    schedule = Schedule.parse(args.delta, args.switch)
    if args.family:
        run = run_kw(graph, load_family(args.family), schedule)
        return {"graph": graph.spec(), "schedule": schedule.to_dict(), "run": run.to_dict()}, True
    if args.verify:
        report = verify_container_property(graph, schedule, budget)
        return report.to_dict(), report.ok

    max_s = args.max_s
    if max_s is None:
        max_s = math.floor(schedule.fingerprint_bound(graph.num_vertices))
    pairs = enumerate_containers(graph, schedule, max_s, budget, threads=args.threads)
    distinct = distinct_containers(pairs)
    upper = container_upper_bound(c for c, _ in distinct)
    body = {
        "graph": graph.spec(),
        "schedule": schedule.to_dict(),
        "max_s": max_s,
        "n_fingerprints": len(pairs),
        "n_containers": len(distinct),
        "max_container": max((len(c) for c, _ in distinct), default=0),
        "container_upper_bound": str(upper),
        "log2_container_upper_bound": math.log2(upper) if upper else None,
        "rows": [{"container_size": len(c), "fingerprints": k} for c, k in distinct],
    }
    return body, True


def cmd_supersat(args, budget: EnumBudget) -> Tuple[dict, bool]:
    from src.core.utils import parse_fraction, parse_mask
    from src.tools import supersaturation as ss

    common = dict(mode=args.mode, trials=args.trials, seed=args.seed or 0, budget=budget)
    need = {
        "kleitman": (), "claim-cd": (), "hamming": ("t",), "tilt": ("p", "q"),
        "transport": ("k", "t"), "mono": ("R",), "prop64": ("N",),
    }[args.lemma]
    missing = [f"--{k}" for k in need if getattr(args, k) is None]
    if missing:
        raise ParameterError(f"--lemma {args.lemma} needs {', '.join(missing)}")
    lemma, n = args.lemma, args.n
    if lemma == "kleitman":
        check = ss.check_kleitman(n, int(args.x), **common)
    elif lemma == "claim-cd":
        check = ss.check_claim_cd(n, int(args.x), **common)
    elif lemma == "hamming":
        check = ss.check_hamming(n, args.t, parse_fraction(args.x, "x"), **common)
    elif lemma == "tilt":
        check = ss.check_tilt(n, args.p, args.q, int(args.x), **common)
    elif lemma == "transport":
        check = ss.check_transport(n, args.k, args.t, parse_fraction(args.x, "x"), **common)
    elif lemma == "mono":
        check = ss.check_mono(n, parse_mask(args.R, "R"), int(args.x), **common)
    else:
        check = ss.check_prop64(n, args.N, int(args.x), **common)
    return check.to_dict(), check.passed


def cmd_bounds(args, budget: EnumBudget) -> Tuple[dict, bool]:
    from src.core.utils import rational_to_dict
    from src.tools import codes, random_katona

    fam = args.family
    if fam == "hamming":
        _require(args, "t")
        value, params = codes.hamming_bound(args.n, args.t), {"n": args.n, "t": args.t}
    elif fam == "transport":
        _require(args, "k", "d")
        value = codes.transport_bound(args.n, args.k, args.d)
        params = {"n": args.n, "k": args.k, "d": args.d}
    else:
        _require(args, "t")
        value = random_katona.katona_K(args.n, args.t)
        params = {"n": args.n, "t": args.t}
    return {"family": fam, "params": params, "bound": rational_to_dict(value)}, True


def cmd_random_katona(args, budget: EnumBudget) -> Tuple[dict, bool]:
    from src.tools.random_katona import monte_carlo_katona, sample_size_interval

    report = monte_carlo_katona(args.n, args.t, args.p, args.trials, args.seed or 0,
                                budget, threads=args.threads)
    body = report.to_dict()
    lo, hi = sample_size_interval(args.n, args.p)
    body["sample_size_interval"] = {"confidence": 0.99, "lo": str(lo), "hi": str(hi)}
    body["rows"] = report.rows
    return body, True


# ---------------------------------------------------------------------------
# construct --what ...
# ---------------------------------------------------------------------------

def _construct_good_triples(args, budget):
    from src.tools import constructions as c

    triples = list(c.good_triples(args.n, args.k))
    return {"n": args.n, "k": args.k, "count": str(len(triples)),
            "expected_count": str(c.good_triple_count(args.n, args.k)),
            "fT_size": str(c.fT_size(args.n, args.k)),
            "triples": [T.to_dict() for T in triples],
            "rows": [T.to_dict() for T in triples]}, True


def _construct_fT(args, budget):
    from src.tools import constructions as c
    from src.utils.file_io import save_family

    triples = c.compatible_triples(args.n, args.k, args.triples, args.radius)
    if not triples:
        raise ParameterError(f"no good triples exist for n={args.n}, k={args.k}")
    width = len(c.free_edges(triples, args.n, args.k))
    choices = [int(ch) for ch in (args.choices or "0" * width)]
    if any(ch not in (0, 1) for ch in choices):
        raise ParameterError(f"--choices must be a 0/1 string, got {args.choices!r}")
    family = c.construct_multi_fT(triples, args.n, args.k, choices)
    if args.extend:
        from src.core.graphs import BnkGraph
        family = c.extend_to_maximal(BnkGraph(args.n, args.k), family)
    if args.family_out:
        save_family(family, args.family_out,
                    comment=f"f(T) for {', '.join(map(str, triples))} at n={args.n}, k={args.k}")
    return {"n": args.n, "k": args.k, "triples": [T.to_dict() for T in triples],
            "free_edges": width, "family": family.to_dict()}, True


def _construct_matching(args, budget):
    from src.core.graphs import BnkGraph
    from src.tools import constructions as c

    graph = BnkGraph(args.n, args.k)
    streamed, maximal = 0, set()
    for fam in c.matching_lower_bound(args.n, args.k, args.i):
        streamed += 1
        if args.extend:
            maximal.add(c.extend_to_maximal(graph, fam))
    body = {"n": args.n, "k": args.k, "i": args.i, "transversals": str(streamed)}
    if args.extend:
        body["distinct_maximal_extensions"] = str(len(maximal))
    return body, not args.extend or len(maximal) == streamed


def _construct_c78(args, budget):
    from src.tools import constructions as c
    from src.utils.file_io import save_set_pairs

    half = args.n // 2
    expected = c.construction_78_count(args.n)
    generated, failing, seen = 0, 0, set()
    first = None
    for fam in c.construction_78(args.n):
        generated += 1
        seen.add(fam)
        if not c.is_skew(fam, half, half):
            failing += 1
        if first is None or len(fam) > len(first):
            first = fam
        if args.limit and generated >= args.limit:
            break
    if args.pairs_out and first is not None:
        save_set_pairs(first, args.pairs_out, comment=f"largest ordered skew family, n={args.n}")
    passed = failing == 0 and len(seen) == generated and (args.limit or generated == expected)
    return {"n": args.n, "expected_count": str(expected), "generated": str(generated),
            "distinct": str(len(seen)), "not_skew": str(failing)}, bool(passed)


def _construct_isp_check(args, budget):
    from src.tools import constructions as c
    from src.utils.file_io import load_set_pairs

    if args.pairs:
        fam = load_set_pairs(args.pairs)
        ok = c.is_isp(fam, args.n)
        return {"n": args.n, "family": fam.to_dict(), "is_isp": ok}, ok
    _require(args, "N", "size")
    result = c.isp_violation_search(args.n, args.N, args.size, args.mode, args.trials,
                                    args.seed or 0, budget)
    return result, True


def _construct_skew_check(args, budget):
    from src.tools import constructions as c
    from src.utils.file_io import load_set_pairs

    if not args.pairs:
        _require(args, "N")
        size, witness = c.max_skew_family(args.N, args.a, args.b, budget)
        return {"N": args.N, "a": args.a, "b": args.b, "max_size": size,
                "witness": witness.to_dict()}, True
    fam = load_set_pairs(args.pairs)
    ok = c.is_skew(fam, args.a, args.b)
    return {"a": args.a, "b": args.b, "family": fam.to_dict(), "is_skew": ok}, ok


_CONSTRUCT: Dict[str, Callable] = {
    "good-triples": _construct_good_triples,
    "fT":           _construct_fT,
    "matching":     _construct_matching,
    "c78":          _construct_c78,
    "isp-check":    _construct_isp_check,
    "skew-check":   _construct_skew_check,
}


def cmd_construct(args, budget: EnumBudget) -> Tuple[dict, bool]:
    body, passed = _CONSTRUCT[args.what](args, budget)
    body["what"] = args.what
    return body, passed


def resolve_profile(level: Optional[str]):
    """The verify-all profile for ``--level``; the built-in default when omitted."""
    return load_default_profile() if level is None else load_profile(level)


def level_help() -> str:
    names = ", ".join(list_available_profiles()) or "none installed"
    return f"Profile id or path (default: desk; shipped: {names})."


def cmd_verify_all(args, budget: EnumBudget) -> Tuple[dict, bool]:
    from src.tools.verification import has_errors, run_verification

    profile = resolve_profile(args.level)
    only = [s.strip() for s in args.only.split(",")] if args.only else None
    result = run_verification(profile, budget, only)
    log.info("verify-all %s: %s", profile.profile_id, result["summary"])
    return result, not has_errors(result["issues"])


COMMANDS = {
    "count":         cmd_count,
    "containers":    cmd_containers,
    "supersat":      cmd_supersat,
    "bounds":        cmd_bounds,
    "random-katona": cmd_random_katona,
    "construct":     cmd_construct,
    "verify-all":    cmd_verify_all,
}


def _require(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise ParameterError(f"{args.command} needs {', '.join(missing)}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", metavar="PROFILE",
                   help="Verification profile id or path; supplies the default budget.")
    g.add_argument("--threads", type=int, default=1, help="Worker threads (results never depend on it).")
    g.add_argument("--out", metavar="PATH", help="Write the report here instead of stdout.")
    g.add_argument("--format", choices=FORMATS, default="json")
    g.add_argument("--verbose", action="store_true", help="DEBUG logging on stderr.")
    g.add_argument("--timing", action="store_true", help="Log wall-clock time on stderr.")
    g.add_argument("--budget-nodes", type=int, dest="budget_nodes")
    g.add_argument("--timeout", type=float)
    g.add_argument("--max-vertices", type=int, dest="max_vertices")
    g.add_argument("--seed", type=int)

    parser = _Parser(prog="container-lab", description=__doc__.split("\n\n")[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("count", parents=[common], help="Enumeration oracles.")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=("independent", "max", "maximal"), default="independent")

    p = sub.add_parser("containers", parents=[common], help="Run or verify the container algorithm.")
    p.add_argument("--graph", required=True)
    p.add_argument("--delta", default="1")
    p.add_argument("--switch")
    p.add_argument("--max-s", type=int, dest="max_s")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--family", metavar="FILE", help="Run on this independent set only.")

    p = sub.add_parser("supersat", parents=[common], help="Supersaturation checks.")
    p.add_argument("--lemma", required=True,
                   choices=("kleitman", "hamming", "tilt", "transport", "mono", "claim-cd", "prop64"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--R")
    p.add_argument("--N", type=int)
    p.add_argument("--x", required=True)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("bounds", parents=[common], help="Exact code and Katona bounds.")
    p.add_argument("--family", choices=("hamming", "transport", "katona"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)

    p = sub.add_parser("random-katona", parents=[common], help="Monte Carlo on P(n, p).")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--p", required=True, help="Probability as NUM/DEN.")
    p.add_argument("--trials", type=int, default=10)

    p = sub.add_parser("construct", parents=[common], help="Explicit constructions.")
    p.add_argument("--what", required=True, choices=tuple(_CONSTRUCT))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--N", type=int)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--size", type=int)
    p.add_argument("--triples", type=int, default=1)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--choices", help="0/1 string over the free matching edges.")
    p.add_argument("--extend", action="store_true", help="Extend to a maximal independent set.")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--pairs", metavar="FILE", help="Set-pair file (N=... header).")
    p.add_argument("--family-out", dest="family_out", metavar="FILE")
    p.add_argument("--pairs-out", dest="pairs_out", metavar="FILE")
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("verify-all", parents=[common], help="Run the acceptance suite.")
    p.add_argument("--level", help=level_help())
    p.add_argument("--only", help="Comma-separated check names.")
    return parser


def _budget_from(args) -> EnumBudget:
    """Budget from --config (or the verify-all level) and the override flags."""
    if args.config:
        base = load_profile(args.config).budget
    elif args.command == "verify-all":
        base = resolve_profile(args.level).budget
    else:
        base = EnumBudget()
    return base.with_overrides(max_vertices=args.max_vertices,
                               max_nodes_expanded=args.budget_nodes, timeout=args.timeout)


def _construct_needs(args) -> None:
    if args.command != "construct":
        return
    needs = {"good-triples": ("n", "k"), "fT": ("n", "k"), "matching": ("n", "k"),
             "c78": ("n",), "isp-check": ("n",), "skew-check": ()}[args.what]
    _require(args, *needs)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def run(argv: Optional[List[str]] = None, stream=None) -> int:
    """Parse ``argv``, run one command, write its report and return the exit code."""
    from src.tools.report_export import build_report, write_report

    try:
        args = build_parser().parse_args(argv)
    except ParameterError as exc:
        configure_logging()
        log.error("%s", exc)
        return EXIT_ERROR
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_ERROR

    configure_logging(args.verbose)
    started = time.perf_counter()
    try:
        if args.threads < 1:
            raise ParameterError(f"--threads must be >= 1, got {args.threads}")
        _construct_needs(args)
        budget = _budget_from(args)
        body, passed = COMMANDS[args.command](args, budget)
        params = {k: v for k, v in sorted(vars(args).items())
                  if k not in _GLOBAL_KEYS and v is not None}
        config = ExperimentConfig(args.command, params, budget, args.seed, args.threads,
                                  args.out, args.format)
        report = build_report(config, body)
        written = write_report(report, args.format, args.out, stream)
    except BudgetExceeded as exc:
        log.error("budget exceeded: %s", exc)
        return EXIT_ERROR
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    except ContainerLabError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    finally:
        if args.timing:
            log.info("%s took %.3f s", args.command, time.perf_counter() - started)

    for path in written:
        log.info("report written to %s", path)
    if not passed:
        log.warning("%s: check failed", args.command)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
