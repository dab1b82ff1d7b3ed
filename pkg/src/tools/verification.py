"""
Verification Engine — Container Lab
===================================

The verify-all suite: exact small-n oracle equalities and property sweeps
for every acceptance item, driven by a VerificationProfile grid.

Severity levels:
    ERROR   — a claimed equality or bound failed, or a check could not run
    WARNING — a check ran but something should be reviewed
    INFO    — useful note (for example a conjecture that held)

Checks never raise on a violated claim; they return issue dicts.
"""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from src.core.budget import EnumBudget
from src.core.containers import Schedule, verify_container_property
from src.core.errors import BudgetExceeded, ContainerLabError
from src.core.experiment_config import VerificationProfile
from src.core.graphs import (
    BnkGraph,
    ComparabilityGraph,
    MonoDiffGraph,
    TransportGraph,
    parse_graph_spec,
)
from src.core.lattice import Family, binom_at_least, binomial, build_scd, validate_scd
from src.tools import codes, constructions, random_katona, supersaturation
from src.tools.enumeration import (
    count_antichains_direct,
    count_independent_sets,
    count_independent_sets_bruteforce,
    count_maximal_independent_sets,
    max_independent_set,
)
from src.tools.report_export import render_json

log = logging.getLogger(__name__)

ANTICHAIN_COUNTS = (2, 3, 6, 20, 168, 7581)


# ---------------------------------------------------------------------------
# Issues
# ---------------------------------------------------------------------------

def _issue(level: str, code: str, message: str, check: str = "") -> dict:
    return {"level": level, "code": code, "message": message, "check": check}


ERROR   = "ERROR"
WARNING = "WARNING"
INFO    = "INFO"


class _Collector:
    """Issue list for one check plus a helper that records a failed claim."""

    def __init__(self, check: str):
        self.check = check
        self.issues: List[dict] = []

    def expect(self, condition: bool, code: str, message: str) -> bool:
        if not condition:
            self.issues.append(_issue(ERROR, code, message, self.check))
        return condition

    def note(self, code: str, message: str, level: str = INFO) -> None:
        self.issues.append(_issue(level, code, message, self.check))


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------

def check_antichains(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    n_max = int(cfg.get("n_max", 5))
    direct_max = int(cfg.get("direct_max", 3))
    scan_n = int(cfg.get("scan_n", 4))
    counts = {}
    for n in range(0, n_max + 1):
        value = count_independent_sets(ComparabilityGraph(n), budget)
        counts[str(n)] = str(value)
        if n < len(ANTICHAIN_COUNTS):
            out.expect(value == ANTICHAIN_COUNTS[n], "ANTICHAIN_COUNT",
                       f"n={n}: counted {value}, expected {ANTICHAIN_COUNTS[n]}")
        if n <= direct_max:
            direct = count_antichains_direct(n)
            out.expect(direct == value, "ANTICHAIN_DIRECT",
                       f"n={n}: direct predicate gives {direct}, oracle {value}")
        if n == scan_n:
            scan = count_independent_sets_bruteforce(ComparabilityGraph(n))
            out.expect(scan == value, "ANTICHAIN_SCAN",
                       f"n={n}: subset scan gives {scan}, oracle {value}")
    return {"counts": counts}


def check_containers(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    specs = cfg.get("graphs", [])
    schedules = [Schedule.parse(s.get("delta", "1"), s.get("switch"))
                 for s in cfg.get("schedules", [{"delta": "1"}])]
    if not any(len(s) > 1 for s in schedules):
        out.note("NO_TWO_STAGE", "no two-stage schedule in the grid", WARNING)
    rows = []
    for spec in specs:
        graph = parse_graph_spec(spec)
        for schedule in schedules:
            report = verify_container_property(graph, schedule, budget)
            out.expect(report.ok, "CONTAINER_PROPERTY",
                       f"{spec} under {schedule.describe()}: "
                       + "; ".join(report.violations[:3]))
            rows.append({"graph": spec, "schedule": schedule.describe(),
                         "independent_sets": report.n_independent_sets,
                         "containers": report.n_containers,
                         "max_fingerprint": report.max_fingerprint, "ok": report.ok})
    return {"runs": rows}


def _lemma_rows(checks: List[supersaturation.LemmaCheck], out: _Collector, code: str) -> list:
    rows = []
    for c in checks:
        out.expect(c.passed, code,
                   f"{c.lemma} {c.params}: observed {c.observed_min} < bound {c.bound}")
        rows.append(c.to_dict())
    return rows


def check_kleitman(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    checks = []
    for n in cfg.get("exhaustive_n", [2, 3]):
        top = (1 << n) - binomial(n, n // 2)
        for x in range(1, top + 1):
            c = supersaturation.check_kleitman(n, x, supersaturation.EXHAUSTIVE, budget=budget)
            checks.append(c)
            if x <= binomial(n, n // 2 + 1):
                out.expect(c.extra.get("equality_attained", False), "KLEITMAN_EQUALITY",
                           f"n={n}, x={x}: layer construction does not attain the bound")
    random_n = cfg.get("random_n")
    if random_n is not None:
        n = int(random_n)
        top = (1 << n) - binomial(n, n // 2)
        for x in cfg.get("random_x", range(1, top + 1)):
            c = supersaturation.check_kleitman(
                n, int(x), supersaturation.RANDOM,
                trials=int(cfg.get("trials", 20)), seed=seed, budget=budget)
            checks.append(c)
            if "layer_witness_pairs" in c.extra:
                out.expect(c.observed_min == c.extra["layer_witness_pairs"], "KLEITMAN_EQUALITY",
                           f"n={n}, x={x}: search stopped at {c.observed_min} pairs, "
                           f"layer construction has {c.extra['layer_witness_pairs']}")
    return {"checks": _lemma_rows(checks, out, "KLEITMAN_BOUND")}


def check_lemma_sweep(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    ss = supersaturation
    trials = int(cfg.get("trials", 20))
    permutations = int(cfg.get("permutations", 50))

    pigeonhole = {}
    runs = [(n, None) for n in range(1, int(cfg.get("pigeonhole_n_max", 3)) + 1)]
    if cfg.get("pigeonhole_sampled_n") is not None:
        runs.append((int(cfg["pigeonhole_sampled_n"]), int(cfg.get("pigeonhole_samples", 5))))
    for n, samples in runs:
        sweep = ss.scd_pigeonhole_sweep(n, permutations, seed, samples)
        failed = [c for c in sweep if not c.passed]
        for c in failed[:3]:
            out.expect(False, "SCD_PIGEONHOLE",
                       f"n={n}, |F|={c.size}: {c.observed_min} bad pairs < {c.bound}")
        pigeonhole[str(n)] = {"families": len(sweep), "violations": len(failed)}

    checks = []
    n = int(cfg.get("hamming_n", 3))
    for x in cfg.get("hamming_x", [1, 2, 3, 4]):
        checks.append(ss.check_hamming(n, 1, int(x), ss.EXHAUSTIVE, budget=budget))
    for size in cfg.get("degree_sizes", [4, 5, 6]):
        checks.append(ss.check_hamming_degree(n, 1, int(size), ss.EXHAUSTIVE, budget=budget))
    if cfg.get("random_n") is not None:
        m = int(cfg["random_n"])
        for x in cfg.get("hamming_random_x", [1, 2, 3]):
            checks.append(ss.check_hamming(m, 1, int(x), ss.RANDOM, trials, seed, budget))
        for size in cfg.get("degree_random_sizes", range(8, 13)):
            checks.append(ss.check_hamming_degree(m, 1, int(size), ss.RANDOM, trials, seed,
                                                  budget))
    for tn, tk, tt, xs in cfg.get("transport", [[5, 2, 1, [0, 1]], [6, 2, 1, [0, 1, 2, 3]]]):
        graph = TransportGraph(tn, tk, tt)
        mode = ss.EXHAUSTIVE if graph.num_vertices <= 16 else ss.RANDOM
        for x in xs:
            checks.append(ss.check_transport(tn, tk, tt, int(x), mode, trials, seed, budget))
    for cn in range(2, int(cfg.get("claim_cd_n_max", 3)) + 1):
        for x in range(0, (1 << (cn - 1)) + 1):
            checks.append(ss.check_claim_cd(cn, x, ss.EXHAUSTIVE, budget=budget))
    for cn, xs in cfg.get("claim_cd", [[4, [0, 1, 2, 3]]]):
        for x in xs:
            checks.append(ss.check_claim_cd(int(cn), int(x), ss.EXHAUSTIVE, budget=budget))
    return {"scd_pigeonhole": pigeonhole, "checks": _lemma_rows(checks, out, "LEMMA_BOUND")}


def check_scd(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    sizes = {}
    for n in range(0, int(cfg.get("n_max", 12)) + 1):
        scd = build_scd(n)
        problems = validate_scd(scd)
        out.expect(not problems, "SCD_INVALID", f"n={n}: {problems[:3]}")
        out.expect(len(scd) == binomial(n, n // 2), "SCD_CHAIN_COUNT",
                   f"n={n}: {len(scd)} chains")
        sizes[str(n)] = len(scd)
    return {"chains": sizes}


def check_codes(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    overlap_n = int(cfg.get("overlap_n_max", 8))
    overlap_t = int(cfg.get("overlap_t_max", 3))
    for n in range(1, overlap_n + 1):
        for t in range(1, min(overlap_t, n) + 1):
            w1 = codes.ball_intersection_size(n, t, 1)
            out.expect(w1 == codes.ball_overlap_formula(n, t), "BALL_OVERLAP",
                       f"W({t},1) at n={n}: {w1} != 2V(n-1,t-1)")
            for d in range(2, n + 1):
                wd = codes.ball_intersection_size(n, t, d)
                out.expect(wd <= w1, "BALL_OVERLAP_MAX", f"W({t},{d}) = {wd} > W({t},1) at n={n}")
    maxima = {}
    for n in range(1, int(cfg.get("code_n_max", 4)) + 1):
        for t in range(1, int(cfg.get("code_t_max", 2)) + 1):
            size, witness = codes.max_code(n, t, budget)
            bound = codes.hamming_bound(n, t)
            maxima[f"{n},{t}"] = size
            out.expect(size <= bound, "CODE_BOUND", f"C({n},{t}) = {size} > H = {bound}")
            out.expect(codes.is_code(witness, 2 * t + 1), "CODE_WITNESS",
                       f"witness for C({n},{t}) is not a code")
    count = codes.count_codes(3, 1, budget)
    out.expect(count == 13, "CODE_COUNT", f"1-error-correcting codes in P(3): {count}, expected 13")
    out.expect(codes.is_perfect(codes.repetition_code(3), 1), "PERFECT_REPETITION",
               "repetition code {∅,[3]} is not perfect")
    out.expect(codes.is_perfect(codes.hamming_7_4_code(), 1), "PERFECT_HAMMING",
               "[7,4] Hamming code is not perfect")
    return {"max_codes": maxima, "codes_in_P3": str(count)}


def check_transport(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    H = codes.transport_bound(4, 2, 3)
    out.expect(H == Fraction(3, 2), "TRANSPORT_BOUND", f"H(4,2,3) = {H}, expected 3/2")
    size, _ = codes.max_transport_code(4, 2, 1, budget)
    out.expect(size == 1 and size <= H, "TRANSPORT_CODE", f"C(4,2,3) = {size}, expected 1")
    for n, k in cfg.get("implication_grid", [[4, 2], [5, 2], [6, 2]]):
        for t in range(1, k + 1):
            bad = codes.pair_ball_implies_close(n, k, t)
            out.expect(not bad, "PAIR_BALL_DISTANCE",
                       f"(n,k,t)=({n},{k},{t}): {len(bad)} intersecting pair balls too far apart")
    n, k, t = cfg.get("overlap", [6, 2, 1])
    brute = codes.max_pair_ball_intersection(n, k, t, distance=1)
    formula = codes.pair_ball_overlap_formula(k, t)
    out.expect(brute == formula, "PAIR_BALL_OVERLAP",
               f"W(k-t,1) at ({n},{k},{t}): brute force {brute}, formula {formula}")
    return {"H_4_2_3": {"num": str(H.numerator), "den": str(H.denominator)},
            "C_4_2_3": str(size), "pair_ball_overlap": str(brute)}


def check_katona(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    values = {}
    for n in range(1, int(cfg.get("n_max", 5)) + 1):
        full = Family.full(n)
        for t in range(1, n + 1):
            K = random_katona.katona_K(n, t)
            size, witness = random_katona.max_t_intersecting(full, t, budget)
            values[f"{n},{t}"] = str(K)
            out.expect(K == size, "KATONA_K", f"K({n},{t}) = {K}, oracle {size}")
            out.expect(random_katona.is_t_intersecting(witness, t), "KATONA_WITNESS",
                       f"oracle witness at ({n},{t}) is not {t}-intersecting")
            extremal = random_katona.build_katona_extremal(n, t)
            out.expect(len(extremal) == K and random_katona.is_t_intersecting(extremal, t),
                       "KATONA_EXTREMAL", f"extremal family at ({n},{t}) is wrong")
    for n in range(1, int(cfg.get("regime_n_max", 20)) + 1):
        out.expect(random_katona.katona_K(n, 1) == 1 << (n - 1), "KATONA_HALF",
                   f"K({n},1) != 2^{n - 1}")
    return {"K": values}


def check_random_model(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    mc = cfg.get("monte_carlo", {"n": 5, "t": 1, "p": "1/2", "trials": 4})
    args = (int(mc["n"]), int(mc["t"]), mc["p"], int(mc["trials"]), seed, budget)
    first = render_json(random_katona.monte_carlo_katona(*args, threads=1).to_dict())
    second = render_json(random_katona.monte_carlo_katona(*args, threads=2).to_dict())
    out.expect(first == second, "MONTE_CARLO_REPRODUCIBLE",
               "monte_carlo_katona reports differ between runs")
    calibration = {}
    cal = cfg.get("calibration")
    if cal:
        report = random_katona.monte_carlo_katona(
            int(cal["n"]), int(cal["t"]), cal["p"], int(cal["trials"]), seed, budget)
        lo, hi = (Fraction(v) for v in cal.get("mean_ratio", ["1/2", "3/4"]))
        out.expect(lo <= report.mean_ratio <= hi, "MONTE_CARLO_CALIBRATION",
                   f"mean ratio {float(report.mean_ratio):.4f} outside [{lo}, {hi}]")
        calibration = {"n": report.n, "t": report.t, "trials": len(report.trials),
                       "mean_ratio": str(report.mean_ratio)}
    built = []
    a = cfg.get("a", "1")
    for n in cfg.get("n", [25]):
        for t in cfg.get("t", [1, 2]):
            ex = random_katona.build_A_ex(n, t)
            low = random_katona.build_A_lower(n, t, a)
            out.expect(len(ex) == binom_at_least(n, -(-(n + t) // 2)), "A_EX_SIZE",
                       f"|A_ex({n},{t})| = {len(ex)}")
            out.expect(random_katona.is_t_intersecting(ex, t), "A_EX_INTERSECTING",
                       f"A_ex({n},{t}) is not {t}-intersecting")
            out.expect(random_katona.is_t_intersecting(low, t), "A_LOWER_INTERSECTING",
                       f"A_lower({n},{t},a={a}) is not {t}-intersecting")
            sample = random_katona.sample_lattice(n, cfg.get("p", "1/4096"), seed).members
            combined = random_katona.katona_lower_construction(sample, t, a)
            out.expect(random_katona.is_t_intersecting(combined, t), "LOWER_CONSTRUCTION",
                       f"lower construction at ({n},{t}) is not {t}-intersecting")
            built.append({"n": n, "t": t, "A_ex": str(len(ex)), "A_lower": str(len(low)),
                          "sample": str(len(sample)), "construction": str(len(combined))})
    return {"families": built, "calibration": calibration}


def check_maximal_sets(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    mis31 = count_maximal_independent_sets(BnkGraph(3, 1), budget)
    mis20 = count_maximal_independent_sets(BnkGraph(2, 0), budget)
    out.expect(mis31 == 5, "MIS_B31", f"mis(B_3,1) = {mis31}, expected 5")
    out.expect(mis20 == 2, "MIS_B20", f"mis(B_2,0) = {mis20}, expected 2")

    n, k = cfg.get("nk", [4, 2])
    graph = BnkGraph(n, k)
    triples = list(constructions.good_triples(n, k))
    out.expect(len(triples) == constructions.good_triple_count(n, k), "GOOD_TRIPLE_COUNT",
               f"{len(triples)} good triples at ({n},{k})")
    for T in triples:
        sets = list(constructions.iter_fT(T, n, k))
        out.expect(len(sets) == constructions.fT_size(n, k), "FT_SIZE",
                   f"|f({T})| = {len(sets)}, expected {constructions.fT_size(n, k)}")
        for fam in sets:
            out.expect(graph.is_independent(fam), "FT_INDEPENDENT", f"f({T}) has an edge")
    origin = constructions.triple_provenance(n, k, extend=True)
    for fam, producers in origin.items():
        expected = sorted({producers[0], constructions.good_triple_partner(producers[0])})
        out.expect(sorted(producers) == expected, "PROVENANCE",
                   f"{fam} arises from {[str(p) for p in producers]}")

    extensions = {}
    for i in range(1, n + 1):
        maximal = {constructions.extend_to_maximal(graph, fam)
                   for fam in constructions.matching_lower_bound(n, k, i)}
        expected = 1 << binomial(n - 1, k)
        extensions[str(i)] = len(maximal)
        out.expect(len(maximal) == expected, "MATCHING_EXTENSIONS",
                   f"M_{i}: {len(maximal)} distinct maximal extensions, expected {expected}")

    mis = count_maximal_independent_sets(graph, budget)
    out.expect(mis >= max(len(origin), 1 << binomial(n - 1, k)), "MIS_LOWER_BOUND",
               f"mis(B_{n},{k}) = {mis} is below the constructions")
    ma_rows = {}
    for m in range(1, int(cfg.get("ma_n_max", 4)) + 1):
        ma = constructions.count_maximal_antichains(m, budget)
        ma_rows[str(m)] = str(ma)
        for kk in range(0, m):
            value = count_maximal_independent_sets(BnkGraph(m, kk), budget)
            out.expect(ma >= value, "MA_VS_MIS", f"ma(P({m})) = {ma} < mis(B_{m},{kk}) = {value}")
    return {"mis_B31": str(mis31), "mis_B20": str(mis20), "mis": str(mis),
            "distinct_fT_maximal": len(origin), "matching_extensions": extensions,
            "maximal_antichains": ma_rows}


def check_two_coloured(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    checked = 0
    for n in range(1, int(cfg.get("n_max", 4)) + 1):
        target = binomial(n, n // 2)
        for R in range(1 << n):
            size, _ = max_independent_set(MonoDiffGraph(n, R), budget)
            checked += 1
            out.expect(size == target, "TWO_COLOURED_SPERNER",
                       f"n={n}, R={R:#x}: largest family {size}, expected {target}")
    return {"colourings_checked": checked}


def check_skew_construction(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    counts = {}
    for n in cfg.get("n", [2, 4]):
        m = binomial(n, n // 2)
        families = list(constructions.construction_78(n))
        expected = 2 ** (m // 2) * 3 ** (m // 2)
        counts[str(n)] = str(len(families))
        out.expect(len(families) == expected == constructions.construction_78_count(n),
                   "C78_COUNT", f"n={n}: {len(families)} families, expected {expected}")
        out.expect(len(set(families)) == len(families), "C78_DISTINCT",
                   f"n={n}: generated families repeat")
        half = n // 2
        bad = [f for f in families if not constructions.is_skew(f, half, half)]
        out.expect(not bad, "C78_SKEW", f"n={n}: {len(bad)} families fail the skew conditions")
    size, _ = constructions.max_skew_family(2, 1, 1, budget)
    out.expect(size == binomial(2, 1), "SKEW_MAX", f"largest skew family at N=2: {size}")
    return {"families": counts, "max_skew_N2": size}


def check_prop64(cfg: dict, budget: EnumBudget, seed: int, out: _Collector) -> dict:
    n = int(cfg.get("n", 4))
    N = int(cfg.get("N", 1))
    checks = [supersaturation.check_prop64(n, N, int(x), supersaturation.EXHAUSTIVE,
                                           budget=budget)
              for x in cfg.get("x", [1, 2])]
    return {"checks": _lemma_rows(checks, out, "PROP64_BOUND")}


CHECKS: Dict[str, Callable[[dict, EnumBudget, int, _Collector], dict]] = {
    "antichains":        check_antichains,
    "containers":        check_containers,
    "kleitman":          check_kleitman,
    "lemma_sweep":       check_lemma_sweep,
    "scd":               check_scd,
    "codes":             check_codes,
    "transport":         check_transport,
    "katona":            check_katona,
    "random_model":      check_random_model,
    "maximal_sets":      check_maximal_sets,
    "two_coloured":      check_two_coloured,
    "skew_construction": check_skew_construction,
    "prop64":            check_prop64,
}


# ---------------------------------------------------------------------------
# Combined entry point
# ---------------------------------------------------------------------------

def run_verification(profile: VerificationProfile, budget: Optional[EnumBudget] = None,
                     only: Optional[List[str]] = None) -> dict:
    """
    Run every enabled check of ``profile`` (or the subset ``only``).

    Returns:
        {"profile", "checks": [{"check", "passed", "details"}], "issues",
         "summary", "rows"}
    """
    budget = budget or profile.budget
    names = [n for n in profile.checks() if only is None or n in only]
    unknown = [n for n in names if n not in CHECKS]
    issues: List[dict] = []
    results = []
    for name in names:
        if name in unknown:
            issues.append(_issue(WARNING, "UNKNOWN_CHECK", f"no check named {name!r}", name))
            continue
        out = _Collector(name)
        log.info("running %s", name)
        try:
            details = CHECKS[name](profile.section(name), budget, profile.seed, out)
        except BudgetExceeded as exc:
            out.note("BUDGET_EXCEEDED", str(exc), ERROR)
            details = {}
        except ContainerLabError as exc:
            out.note("CHECK_FAILED", f"{type(exc).__name__}: {exc}", ERROR)
            details = {}
        passed = not has_errors(out.issues)
        if not passed:
            log.warning("%s: %s", name, issues_summary(out.issues))
        results.append({"check": name, "passed": passed, "details": details})
        issues.extend(out.issues)
    issues = _sort_issues(issues)
    return {
        "profile": profile.profile_id,
        "checks": results,
        "issues": issues,
        "summary": issues_summary(issues),
        "rows": [{"check": r["check"], "passed": r["passed"]} for r in results],
    }


def has_errors(issues: List[dict]) -> bool:
    """Return True if any issue is at ERROR level."""
    return any(i["level"] == ERROR for i in issues)


def issues_summary(issues: List[dict]) -> str:
    """Return a short human-readable summary string."""
    counts = Counter(i["level"] for i in issues)
    parts = []
    for level in (ERROR, WARNING, INFO):
        if counts[level]:
            parts.append(f"{counts[level]} {level}")
    return ", ".join(parts) if parts else "No issues found"


_LEVEL_ORDER = {ERROR: 0, WARNING: 1, INFO: 2}


def _sort_issues(issues: List[dict]) -> List[dict]:
    return sorted(issues, key=lambda i: (_LEVEL_ORDER.get(i["level"], 9), i["check"], i["code"]))
