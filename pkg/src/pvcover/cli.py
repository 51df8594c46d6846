"""Command-line interface.

Exit codes: 0 success, 2 file or parse problems, 3 solver failures,
4 rounding that stays infeasible through all restarts.  Output is
byte-identical across runs for a fixed seed; wall-clock timings only
appear behind --timings so that guarantee survives.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import BenchConfig, format_csv, gap_rows, run_bench
from .errors import InputError, PvcoverError, RoundingFailure, SolverError
from .exact import DEFAULT_LIMIT, exact_solve
from .greedy import greedy_solve
from .instance import (
    GeneratorConfig,
    generate_random,
    generate_star,
    parse_instance,
    parse_set_cover,
    reduce_set_cover,
    serialize_instance,
    with_overlapping_groups,
)
from .relaxation import solve_natural_lp, solve_relaxation
from .rounding import RoundingConfig, precondition_margins, single_round_success, solve_rounded

__all__ = ["main"]


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not valid UTF-8: {exc}") from None


def _load(args) -> "Instance":
    return parse_instance(_read(args.instance), strict_partition=args.strict_partition)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _print_instance_header(args, inst):
    print(f"instance: {args.instance}")
    print(f"n: {inst.n}")
    print(f"m: {inst.m}")
    print(f"r: {inst.r}")


def _cmd_solve(args) -> int:
    inst = _load(args)
    cut_log: list[str] | None = [] if args.cut_log else None
    frac = solve_relaxation(inst, mode=args.mode, cut_log=cut_log)
    cfg = RoundingConfig(seed=args.seed, rounds_constant=args.rounds_constant)
    sel, report = solve_rounded(inst, frac, cfg, prune=args.prune)
    _print_instance_header(args, inst)
    print(f"mode: {args.mode}")
    if frac.cost_cap is not None:
        print(f"cost_cap: {frac.cost_cap}")
    print(f"cuts: {max(0, len(frac.certificate) - inst.r)}")
    print(report.to_text(include_timings=args.timings))
    print("chosen: " + ",".join(str(v) for v in sel.chosen))
    if args.cut_log:
        Path(args.cut_log).write_text(
            "".join(line + "\n" for line in cut_log), encoding="utf-8"
        )
    return 0


def _cmd_exact(args) -> int:
    inst = _load(args)
    res = exact_solve(inst, limit=args.limit)
    _print_instance_header(args, inst)
    print(f"optimum: {res.cost}")
    print("chosen: " + ",".join(str(v) for v in res.chosen))
    print(f"nodes: {res.nodes}")
    return 0


def _cmd_greedy(args) -> int:
    inst = _load(args)
    sel = greedy_solve(inst)
    _print_instance_header(args, inst)
    print(f"cost: {sel.cost}")
    print("chosen: " + ",".join(str(v) for v in sel.chosen))
    print("covered: " + ",".join(str(w) for w in sel.covered))
    return 0


def _cmd_lp1(args) -> int:
    inst = _load(args)
    frac = solve_natural_lp(inst)
    _print_instance_header(args, inst)
    print(f"value: {frac.objective:.9g}")
    return 0


def _cmd_verify(args) -> int:
    inst = _load(args)
    frac = solve_relaxation(inst, mode=args.mode)
    _print_instance_header(args, inst)
    print(f"lp_objective: {frac.objective:.9g}")
    for gi, margin in precondition_margins(inst, frac.x):
        print(f"margin group {gi}: {margin:.9g}")
    rates = single_round_success(inst, frac.x, args.trials, args.seed)
    worst = None
    for gi, rate in enumerate(rates):
        print(
            f"group {gi}: frequency {rate.frequency:.6f} radius {rate.radius:.6f}"
        )
        floor = rate.frequency + rate.radius
        if worst is None or floor < worst:
            worst = floor
    print(f"trials: {args.trials}")
    print(f"min_frequency_plus_radius: {worst:.6f}")
    print(f"bound: {5 / 8:.6f}")
    return 0


def _cmd_generate(args) -> int:
    if args.kind == "star":
        inst = generate_star(args.degree)
    elif args.kind == "random":
        gen = GeneratorConfig(
            cost_range=(args.cost_min, args.cost_max),
            weight_range=(args.weight_min, args.weight_max),
            group_assignment=args.group_assignment,
        )
        inst = generate_random(args.n, args.m, args.r, args.seed, gen)
        if args.overlap_extra > 0:
            inst = with_overlapping_groups(inst, args.overlap_extra, args.seed + 1)
    else:  # setcover-reduce
        inst = reduce_set_cover(parse_set_cover(_read(args.input)))
    _emit(serialize_instance(inst), args.out)
    return 0


def _cmd_bench(args) -> int:
    cfg = BenchConfig(
        count=args.count,
        seed=args.seed,
        n_range=(args.n_min, args.n_max),
        m_range=(args.m_min, args.m_max),
        r_range=(args.r_min, args.r_max),
        trials=args.trials,
        generator=GeneratorConfig(weight_range=(args.weight_min, args.weight_max)),
        overlap_extra=args.overlap_extra,
        exact_limit=args.exact_limit,
        mode=args.mode,
        rounds_constant=args.rounds_constant,
    )
    records, footer = run_bench(cfg)
    _emit(format_csv(records, footer, include_timings=args.timings), args.out)
    return 0


def _cmd_gap(args) -> int:
    degrees = [int(tok) for tok in args.degrees.split(",") if tok]
    lines = ["degree natural_lp strengthened_lp exact"]
    for d, nat, strong, opt in gap_rows(degrees):
        lines.append(f"{d} {nat:.9g} {strong:.9g} {opt}")
    text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _add_instance_arg(p):
    p.add_argument("instance", help="instance file")
    p.add_argument(
        "--strict-partition",
        action="store_true",
        help="require groups to partition the edge set",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvcover",
        description="Partition vertex cover solvers: strengthened LP plus randomized rounding",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="LP relaxation plus randomized rounding")
    _add_instance_arg(p)
    p.add_argument("--seed", type=int, default=0, help="rounding seed (64-bit)")
    p.add_argument("--mode", choices=["direct", "delta"], default="direct")
    p.add_argument("--rounds-constant", type=int, default=4)
    p.add_argument("--prune", action="store_true", help="also report a pruned solution")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.add_argument("--cut-log", default=None, help="write one line per generated cut")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("exact", help="branch-and-bound optimum")
    _add_instance_arg(p)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("greedy", help="greedy baseline")
    _add_instance_arg(p)
    p.set_defaults(func=_cmd_greedy)

    p = sub.add_parser("lp1", help="natural relaxation value (for gap studies)")
    _add_instance_arg(p)
    p.set_defaults(func=_cmd_lp1)

    p = sub.add_parser("verify", help="Monte Carlo check of the per-round success bound")
    _add_instance_arg(p)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["direct", "delta"], default="direct")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("generate", help="write instances in canonical form")
    gsub = p.add_subparsers(dest="kind", required=True)

    g = gsub.add_parser("star", help="unit star with one group")
    g.add_argument("--degree", type=int, required=True)
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_generate)

    g = gsub.add_parser("random", help="random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--cost-min", type=int, default=1)
    g.add_argument("--cost-max", type=int, default=10)
    g.add_argument("--weight-min", type=int, default=1)
    g.add_argument("--weight-max", type=int, default=1)
    g.add_argument("--group-assignment", choices=["random", "round_robin"], default="random")
    g.add_argument("--overlap-extra", type=float, default=0.0,
                   help="probability of each extra edge-group membership")
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_generate)

    g = gsub.add_parser("setcover-reduce", help="encode a set cover file")
    g.add_argument("input", help="set cover file (p sc header)")
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="batch of random instances, CSV out")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-min", type=int, default=6)
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--m-min", type=int, default=8)
    p.add_argument("--m-max", type=int, default=24)
    p.add_argument("--r-min", type=int, default=1)
    p.add_argument("--r-max", type=int, default=4)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--weight-min", type=int, default=1)
    p.add_argument("--weight-max", type=int, default=1)
    p.add_argument("--overlap-extra", type=float, default=0.0)
    p.add_argument("--exact-limit", type=int, default=20)
    p.add_argument("--mode", choices=["direct", "delta"], default="direct")
    p.add_argument("--rounds-constant", type=int, default=4)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gap", help="integrality gap table on stars")
    p.add_argument("--degrees", default="2,5,20,100")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gap)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RoundingFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PvcoverError as exc:  # pragma: no cover - base class safety net
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
