"""Command-line front end: solve, duel, family, verify and bench.

Output is JSON (or CSV for bench/verify) on stdout or ``--out``; nothing
time-dependent is ever printed, so a fixed config and seed reproduce the
same bytes. Exit codes: 0 ok, 1 verification failure, 2 usage, 3 refuted,
4 runaway algorithm, 5 capacity.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .adversary import duel, random_strategy, truncated_dmk
from .count_majority import count_query_bound, find_majority_count
from .errors import CapacityError, RunawayError
from .families import (family_even, family_odd, family_three_sets, even_family_bound,
                       odd_family_bound, verify_unbalanceable, Confirmed)
from .oracle import HonestOracle
from .partition_majority import (pair_recursion_bound, pair_recursion_k2,
                                 partition_majority_improved, partition_query_bound)
from .rng import SplitMix64
from .setcore import coloring_from_str, coloring_to_str, is_correct_answer

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REFUTED, EXIT_RUNAWAY, EXIT_CAPACITY = 0, 1, 2, 3, 4, 5
MAX_EXHAUSTIVE_N = 20

ALGORITHMS: Dict[str, Tuple[Callable, str]] = {
    "count": (find_majority_count, "count"),
    "partition": (partition_majority_improved, "partition"),
    "k2pairs": (pair_recursion_k2, "both"),
}


class UsageError(Exception):
    pass


def budget(algo: str, n: int, k: int) -> float:
    if algo == "count":
        return count_query_bound(n, k)
    if algo == "partition":
        return partition_query_bound(n, k)
    return pair_recursion_bound(n)


def check_pair(algo: str, n: int, k: int) -> None:
    if not 2 <= k < n:
        raise UsageError(f"need 2 <= k < n, got n={n}, k={k}")
    if algo == "k2pairs" and k != 2:
        raise UsageError("k2pairs needs k = 2")


def parse_range(text: str) -> List[int]:
    """'5', '2..8' or '3,5,7' (ranges may appear in a comma list)."""
    out: List[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"bad integer range {text!r}") from None
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def answer_json(answer) -> object:
    return "NoMajority" if answer is None else answer


def run_one(algo: str, coloring, k: int) -> Tuple[object, bool, int]:
    fn, mode = ALGORITHMS[algo]
    oracle = HonestOracle(coloring, k, mode)
    ans = fn(oracle)
    return ans, is_correct_answer(coloring, ans), oracle.queries_used


def all_colorings(n: int):
    if n > MAX_EXHAUSTIVE_N:
        raise CapacityError(f"exhaustive mode is limited to n <= {MAX_EXHAUSTIVE_N}")
    return itertools.product((0, 1), repeat=n)


# -- subcommands -------------------------------------------------------------


def cmd_solve(args) -> Tuple[object, int]:
    n, k, algo = args.n, args.k, args.algo
    check_pair(algo, n, k)
    if args.coloring == "exhaustive":
        stats = sweep(algo, n, k, all_colorings(n))
        return {"n": n, "k": k, "algo": algo, "seed": 0, "coloring": "exhaustive", **stats}, EXIT_OK
    if args.coloring == "random":
        if args.seed == 0:
            raise UsageError("seed 0 is reserved for exhaustive mode")
        coloring = SplitMix64(args.seed).coloring(n)
    else:
        try:
            coloring = coloring_from_str(args.coloring)
        except ValueError as e:
            raise UsageError(str(e)) from None
        if len(coloring) != n:
            raise UsageError(f"coloring has {len(coloring)} items, expected n={n}")
    fn, mode = ALGORITHMS[algo]
    oracle = HonestOracle(coloring, k, mode)
    ans = fn(oracle)
    report = {
        "n": n, "k": k, "algo": algo, "seed": args.seed,
        "coloring": coloring_to_str(coloring),
        "answer": answer_json(ans),
        "correct": is_correct_answer(coloring, ans),
        "queries": oracle.queries_used,
        "budget": budget(algo, n, k),
    }
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(oracle.transcript.to_jsonl())
    return report, EXIT_OK


def sweep(algo: str, n: int, k: int, colorings: Iterable) -> dict:
    runs = failures = worst = 0
    for c in colorings:
        _, ok, q = run_one(algo, c, k)
        runs += 1
        failures += not ok
        worst = max(worst, q)
    bound = budget(algo, n, k)
    return {"colorings": runs, "failures": failures, "max_queries": worst,
            "bound": bound, "within_bound": worst <= bound}


DUEL_ALGORITHMS = ("partition", "count", "truncated", "random")


def cmd_duel(args) -> Tuple[object, int]:
    n, k = args.n, args.k
    if not 3 <= k < n:
        raise UsageError(f"duels need 3 <= k < n, got n={n}, k={k}")
    parity = "odd" if k % 2 else "even"
    if args.tau is not None and parity == "odd":
        raise UsageError("tau only applies to even k")
    if args.tau is not None and (args.tau < 2 or args.tau % 2):
        raise UsageError("tau must be a positive even integer")
    algorithm = {
        "partition": partition_majority_improved,
        "count": find_majority_count,
        "truncated": truncated_dmk,
        "random": random_strategy(args.seed),
    }[args.algo]
    try:
        report = duel(algorithm, parity, n, k, args.tau)
    except RunawayError as e:
        return {"n": n, "k": k, "algo": args.algo, "error": str(e)}, EXIT_RUNAWAY
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(report.transcript.to_jsonl())
    out = {"algo": args.algo, "seed": args.seed, **report.to_json()}
    return out, EXIT_REFUTED if report.refuted else EXIT_OK


def cmd_family(args) -> Tuple[object, int]:
    k, kind = args.k, args.construction
    if kind == "auto":
        kind = "odd" if k % 2 else "even"
    try:
        fam = {"even": family_even, "odd": family_odd, "three-sets": family_three_sets}[kind](k)
    except ValueError as e:
        raise UsageError(str(e)) from None
    bound = {"even": even_family_bound, "odd": odd_family_bound,
             "three-sets": lambda _k: 3}[kind](k)
    verdict = verify_unbalanceable(fam)
    out = {**fam.to_json(), "construction": kind, "size": len(fam), "bound": bound,
           "verdict": "Confirmed" if isinstance(verdict, Confirmed) else "Witness"}
    if not isinstance(verdict, Confirmed):
        out["witness"] = coloring_to_str(verdict.coloring)
    return out, EXIT_OK if isinstance(verdict, Confirmed) else EXIT_FAIL


def cmd_verify(args) -> Tuple[object, int]:
    if args.n_max > MAX_EXHAUSTIVE_N:
        raise CapacityError(f"exhaustive mode is limited to n <= {MAX_EXHAUSTIVE_N}")
    rows = []
    for k in parse_range(args.k):
        for n in range(max(k + 1, args.n_min), args.n_max + 1):
            for algo in args.algo.split(","):
                if algo not in ALGORITHMS:
                    raise UsageError(f"unknown algorithm {algo!r}")
                if algo == "k2pairs" and k != 2:
                    continue
                check_pair(algo, n, k)
                rows.append({"n": n, "k": k, "algo": algo, **sweep(algo, n, k, all_colorings(n))})
    ok = all(r["failures"] == 0 for r in rows)
    return rows, EXIT_OK if ok else EXIT_FAIL


BENCH_FIELDS = ["n", "k", "algo", "trials", "mean_queries", "max_queries", "bound", "within_bound"]


def _bench_cell(job) -> dict:
    algo, n, k, trials, seed = job
    if seed == 0:
        colorings = all_colorings(n)
    else:
        rng = SplitMix64(seed)
        colorings = (rng.coloring(n) for _ in range(trials))
    runs = total = worst = failures = 0
    for c in colorings:
        _, ok, q = run_one(algo, c, k)
        runs += 1
        total += q
        worst = max(worst, q)
        failures += not ok
    if failures:
        raise AssertionError(f"{algo} answered wrongly on {failures} colorings (n={n}, k={k})")
    bound = budget(algo, n, k)
    return {"n": n, "k": k, "algo": algo, "trials": runs, "seed": seed,
            "mean_queries": total / runs, "max_queries": worst,
            "bound": bound, "within_bound": worst <= bound}


def cmd_bench(args) -> Tuple[object, int]:
    jobs = []
    for k in parse_range(args.k):
        for n in parse_range(args.n):
            for algo in args.algo.split(","):
                if algo not in ALGORITHMS:
                    raise UsageError(f"unknown algorithm {algo!r}")
                if algo == "k2pairs" and k != 2:
                    continue
                check_pair(algo, n, k)
                if args.seed == 0 and n > MAX_EXHAUSTIVE_N:
                    raise CapacityError(f"exhaustive mode is limited to n <= {MAX_EXHAUSTIVE_N}")
                jobs.append((algo, n, k, args.trials, args.seed))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_cell, jobs))
    else:
        rows = [_bench_cell(j) for j in jobs]
    return rows, EXIT_OK


# -- plumbing ------------------------------------------------------------------


def render(obj, fmt: str) -> str:
    if fmt == "csv":
        rows = obj if isinstance(obj, list) else [obj]
        buf = io.StringIO()
        fields = BENCH_FIELDS if rows and set(BENCH_FIELDS) <= set(rows[0]) else list(rows[0])
        w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({key: _cell(v) for key, v in r.items()})
        return buf.getvalue()
    if isinstance(obj, list):
        return "".join(json.dumps(r) + "\n" for r in obj)
    return json.dumps(obj) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kmajority", description="Majority finding with k-subset queries.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="json"):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt)

    s = sub.add_parser("solve", help="run one algorithm against a hidden coloring")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--algo", choices=tuple(ALGORITHMS), default="count")
    s.add_argument("--coloring", default="random",
                   help="bit string, 'random' (uses --seed) or 'exhaustive'")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--transcript", help="write the query log as JSON lines")
    common(s)

    d = sub.add_parser("duel", help="play an algorithm against the lower-bound adversary")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--algo", choices=DUEL_ALGORITHMS, default="partition")
    d.add_argument("--tau", type=int, help="even-k threshold (default: nearest even n^(1/(1+log2 k)))")
    d.add_argument("--seed", type=int, default=1, help="seed of the random strategy")
    d.add_argument("--transcript", help="write the query log as JSON lines")
    common(d)

    f = sub.add_parser("family", help="build and verify an unbalanceable family")
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--construction", choices=("auto", "even", "odd", "three-sets"), default="auto")
    common(f)

    v = sub.add_parser("verify", help="exhaustive correctness sweep over all colorings")
    v.add_argument("--k", default="3", help="k, a range like 2..8, or a list")
    v.add_argument("--n-min", type=int, default=1)
    v.add_argument("--n-max", type=int, required=True)
    v.add_argument("--algo", default="count,partition")
    common(v)

    b = sub.add_parser("bench", help="query counts over seeded random colorings")
    b.add_argument("--k", required=True, help="k, a range like 2..8, or a list")
    b.add_argument("--n", required=True, help="n, a range or a list")
    b.add_argument("--algo", default="count,partition,k2pairs")
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--seed", type=int, default=1, help="0 enumerates every coloring instead")
    b.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(b, fmt="csv")
    return p


COMMANDS = {"solve": cmd_solve, "duel": cmd_duel, "family": cmd_family,
            "verify": cmd_verify, "bench": cmd_bench}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        result, code = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"kmajority: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as e:
        print(f"kmajority: capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    text = render(result, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
