"""Command-line entry point.

Subcommands: ``solve`` (makespan EPTAS), ``santa`` (max-min EPTAS),
``baseline`` (greedy / LP 2-approximation), ``oracle`` (brute force),
``gen`` (seeded instance generator), ``verify`` (recompute an objective),
``bench`` (suite runner emitting a ratio CSV).  All numeric output is
printed as exact rationals.

Exit codes: 0 success, 1 usage error, 2 no schedule / infeasible,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from .baseline import greedy_bound, lst_two_approx
from .errors import (
    ConfigExplosion,
    InfeasibleDemands,
    LimitExceeded,
    NodeLimitExceeded,
    ParseError,
    TypeschedError,
    Unschedulable,
)
from .instance import (
    Instance,
    _format_rational,
    _parse_rational,
    evaluate_makespan,
    evaluate_min_load,
    generate_instance,
    parse_instance,
    parse_schedule,
    serialize_instance,
    serialize_schedule,
)
from .makespan import EptasParams, solve_makespan
from .milp import DEFAULT_NODE_BUDGET
from .oracle import brute_force_makespan, brute_force_min_load
from .santa import solve_santa

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_SCHEDULE = 2
EXIT_BUDGET = 3

BENCH_COLUMNS = ["instance-id", "algo", "epsilon", "objective", "oracle", "ratio", "wall-ms"]


def _read_instance(path: str) -> Instance:
    with open(path, "rb") as fh:
        return parse_instance(fh.read())


def _epsilon(text: str) -> Fraction:
    eps = _parse_rational(text, "epsilon")
    if not (0 < eps < 1):
        raise ParseError("epsilon must lie strictly between 0 and 1")
    return eps


def _cmd_solve(args, maxmin: bool) -> int:
    inst = _read_instance(args.instance)
    params = EptasParams(
        epsilon=_epsilon(args.epsilon),
        node_budget=args.node_budget,
        config_limit=args.config_limit,
    )
    if maxmin:
        sched = solve_santa(inst, params)
        value = evaluate_min_load(inst, sched)
    else:
        sched = solve_makespan(inst, params)
        value = evaluate_makespan(inst, sched)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(serialize_schedule(sched))
    print(_format_rational(value))
    return EXIT_OK


def _cmd_baseline(args) -> int:
    inst = _read_instance(args.instance)
    if args.algo == "greedy":
        sched, value = greedy_bound(inst)
    else:
        sched, value = lst_two_approx(inst)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(serialize_schedule(sched))
    print(_format_rational(value))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    inst = _read_instance(args.instance)
    if args.objective == "makespan":
        value, sched = brute_force_makespan(inst)
    else:
        value, sched = brute_force_min_load(inst)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(serialize_schedule(sched))
    print(_format_rational(value))
    return EXIT_OK


def _cmd_gen(args) -> int:
    mults = tuple(int(x) for x in args.mults.split(","))
    inst = generate_instance(
        k=args.types,
        n=args.jobs,
        multiplicities=mults,
        p_max=args.pmax,
        seed=args.seed,
    )
    data = serialize_instance(inst)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst = _read_instance(args.instance)
    with open(args.schedule, "rb") as fh:
        sched = parse_schedule(fh.read())
    if args.objective == "makespan":
        value = evaluate_makespan(inst, sched)
    else:
        value = evaluate_min_load(inst, sched)
    print(_format_rational(value))
    return EXIT_OK


def _bench_objective(inst: Instance, algo: str, epsilon) -> Fraction:
    if algo == "eptas":
        sched = solve_makespan(inst, EptasParams(epsilon=epsilon))
        return evaluate_makespan(inst, sched)
    if algo == "santa":
        sched = solve_santa(inst, EptasParams(epsilon=epsilon))
        return evaluate_min_load(inst, sched)
    if algo == "greedy":
        return greedy_bound(inst)[1]
    if algo == "lp2":
        return lst_two_approx(inst)[1]
    raise ParseError(f"unknown algorithm {algo!r}")


def run_bench(suite: dict) -> str:
    """Run the suite and return the CSV text.

    Suite format: ``{"instances": [{"id", "types", "jobs", "mults",
    "pmax", "seed"}, ...], "algorithms": [{"algo", "epsilon"?}, ...]}``.
    The oracle column holds the brute-force optimum of the algorithm's
    objective (min load for ``santa``, makespan otherwise).
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for spec in suite["instances"]:
        inst = generate_instance(
            k=spec["types"],
            n=spec["jobs"],
            multiplicities=tuple(spec["mults"]),
            p_max=spec["pmax"],
            seed=spec["seed"],
        )
        oracles: dict[str, Fraction] = {}
        for alg in suite["algorithms"]:
            algo = alg["algo"]
            eps = _epsilon(alg["epsilon"]) if "epsilon" in alg else None
            objective_kind = "minload" if algo == "santa" else "makespan"
            if objective_kind not in oracles:
                if objective_kind == "minload":
                    oracles[objective_kind] = brute_force_min_load(inst)[0]
                else:
                    oracles[objective_kind] = brute_force_makespan(inst)[0]
            opt = oracles[objective_kind]
            start = time.monotonic()
            value = _bench_objective(inst, algo, eps)
            wall_ms = int((time.monotonic() - start) * 1000)
            ratio = _format_rational(value / opt) if opt != 0 else ""
            writer.writerow(
                [
                    spec["id"],
                    algo,
                    _format_rational(eps) if eps is not None else "",
                    _format_rational(value),
                    _format_rational(opt),
                    ratio,
                    wall_ms,
                ]
            )
    return out.getvalue()


def _cmd_bench(args) -> int:
    with open(args.suite, "r", encoding="utf-8") as fh:
        suite = json.load(fh)
    text = run_bench(suite)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typesched",
        description="Exact-rational scheduling for machines with few types.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--instance", required=True)
        p.add_argument("--epsilon", required=True, help="rational in (0,1), e.g. 1/4")
        p.add_argument("--out", help="write the schedule here")
        p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
        p.add_argument("--config-limit", type=int, default=50_000)
        return p

    add_solver("solve", "minimize the makespan (EPTAS)")
    add_solver("santa", "maximize the minimum load (EPTAS)")

    p = sub.add_parser("baseline", help="greedy or LP-rounding bound")
    p.add_argument("--algo", required=True, choices=["greedy", "lp2"])
    p.add_argument("--instance", required=True)
    p.add_argument("--out", help="write the schedule here")

    p = sub.add_parser("oracle", help="brute-force optimum (desk scale)")
    p.add_argument("--instance", required=True)
    p.add_argument("--objective", required=True, choices=["makespan", "minload"])
    p.add_argument("--out", help="write the witness schedule here")

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--types", type=int, required=True)
    p.add_argument("--jobs", type=int, required=True)
    p.add_argument("--mults", required=True, help="comma-separated machine counts")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("verify", help="recompute a schedule's objective")
    p.add_argument("--instance", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--objective", required=True, choices=["makespan", "minload"])

    p = sub.add_parser("bench", help="run a suite and emit a ratio CSV")
    p.add_argument("--suite", required=True, help="JSON suite description")
    p.add_argument("--out", required=True, help="CSV output path")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "solve":
            return _cmd_solve(args, maxmin=False)
        if args.command == "santa":
            return _cmd_solve(args, maxmin=True)
        if args.command == "baseline":
            return _cmd_baseline(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "bench":
            return _cmd_bench(args)
        print(f"unknown command {args.command!r}", file=sys.stderr)
        return EXIT_USAGE
    except (NodeLimitExceeded, ConfigExplosion, LimitExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (Unschedulable, InfeasibleDemands) as exc:
        print(f"no schedule: {exc}", file=sys.stderr)
        return EXIT_NO_SCHEDULE
    except (ParseError, OSError, ValueError, KeyError, TypeschedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
