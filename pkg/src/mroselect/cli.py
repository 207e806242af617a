"""Command-line interface.

Subcommands: ``solve`` (brute-force minmax regret), ``heuristic`` (max-min
insertion heuristic and baselines), ``bench`` (experiment runner), ``estimate``
(histogram / text-index intervals), ``simulate`` (actual-cost comparison).
Exit status: 0 success, 1 validation or input error, 2 capacity refusal.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import bench, engine, estimate, exact, heuristic, simulate
from .estimate import RangePredicate
from .model import CapacityLimitError, InvalidInstanceError, load_instance

# the heuristic command skips the 2^K extreme-regret report beyond this
EXTREME_REPORT_BITS = 20

_PRED_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*([<>])\s*([-+]?[0-9.]+(?:[eE][-+]?\d+)?)\s*$")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}g}"


def parse_range_predicate(text: str) -> RangePredicate:
    m = _PRED_RE.match(text)
    if not m:
        raise ValueError(
            f"cannot parse predicate {text!r}; expected e.g. \"X<126\" or \"X>0.5\""
        )
    return RangePredicate(op="lt" if m.group(2) == "<" else "gt", value=float(m.group(3)))


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    opts = exact.SolveOptions(prune_dominance=not args.no_prune, max_n=args.max_n)
    report = exact.brute_force_mro(instance, opts)
    names = " ".join(report.plan.names(instance))
    print(f"plan: {names}, max_regret: {_fmt(report.max_regret, args.precision)}")
    print("witness: " + " ".join(_fmt(v, args.precision) for v in report.witness.values))
    print(f"witness_class: {report.scenario_class}")
    return 0


def _cmd_heuristic(args) -> int:
    instance = load_instance(args.instance)
    if args.baseline == "midpoint":
        plan = heuristic.midpoint_plan(instance)
        method = "midpoint"
    elif args.baseline == "meanvalue":
        plan = heuristic.point_estimate_plan(
            instance, (instance.lows() + instance.highs()) / 2.0
        )
        method = "meanvalue"
    else:
        config = heuristic.HeuristicConfig(
            initial=args.initial, phases=tuple(args.phases.split(",")), seed=args.seed
        )
        run = heuristic.run_pipeline_detailed(instance, config)
        if run.chain_fallback:
            print("note: dominant-chain initial disabled (unequal costs); starting empty")
        plan = run.plan
        method = f"{config.initial}:{','.join(config.phases)}"
    maxmin = engine.max_regret_maxmin(plan, instance).max_regret
    k_bits = engine._scenario_bits(instance)[1]
    if k_bits <= EXTREME_REPORT_BITS:
        extreme = _fmt(engine.max_regret_extreme(plan, instance).max_regret,
                       args.precision)
    else:
        extreme = f"n/a (2^{k_bits} scenarios)"
    print(f"method: {method}")
    print(f"plan: {' '.join(plan.names(instance))}, "
          f"maxmin_regret: {_fmt(maxmin, args.precision)}, "
          f"extreme_regret: {extreme}")
    return 0


def _load_bench_config(path: str) -> bench.ExperimentConfig:
    with open(path) as fh:
        data = json.load(fh)
    try:
        n_range = data["n_range"]
        if isinstance(n_range, dict):
            ns = tuple(range(int(n_range["from"]), int(n_range["to"]) + 1))
        else:
            ns = tuple(int(n) for n in n_range)
        return bench.ExperimentConfig(
            n_range=ns,
            instances_per_n=int(data["instances_per_n"]),
            seed=int(data.get("seed", 0)),
            methods=tuple(data.get("methods", ["dcw:w+,w+", "midpoint"])),
            exact_reference=bool(data.get("exact_reference", True)),
        )
    except KeyError as exc:
        raise ValueError(f"bench config {path} missing field {exc}") from exc


def _cmd_bench(args) -> int:
    config = _load_bench_config(args.config)
    rows = bench.run_experiment(config)
    bench.write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    for s in bench.summarize(rows):
        pct = "-" if s["pct_exact"] is None else f"{s['pct_exact']:.0f}%"
        avg = "-" if s["avg_lambda"] is None else f"{s['avg_lambda']:.4f}"
        worst = "-" if s["worst_lambda"] is None else f"{s['worst_lambda']:.4f}"
        print(f"n={s['n']} method={s['method']} exact={pct} avg_lambda={avg}"
              f" worst_lambda={worst} missed_zero={s['missed_zero']}"
              f" avg_time_ms={s['avg_time_ms']:.2f}")
    return 0


def _cmd_estimate(args) -> int:
    if args.hist:
        hist = estimate.load_histogram(args.hist)
        pred = parse_range_predicate(args.pred)
        interval = estimate.interval_for_range(hist, pred)
        point = estimate.point_for_range(hist, pred)
        print(f"[{_fmt(interval.s_lo, args.precision)},"
              f" {_fmt(interval.s_hi, args.precision)}]"
              f" point={_fmt(point, args.precision)}")
        return 0
    with open(args.corpus) as fh:
        docs = [json.loads(line) for line in fh if line.strip()]
    indexes = estimate.build_text_index(docs)
    if args.field:
        if args.field not in indexes:
            raise ValueError(f"field {args.field!r} not in corpus; have {sorted(indexes)}")
        field = args.field
    elif len(indexes) == 1:
        field = next(iter(indexes))
    else:
        raise ValueError(f"corpus has fields {sorted(indexes)}; pick one with --field")
    interval = estimate.interval_for_substring(indexes[field], args.keyword)
    print(f"[{_fmt(interval.s_lo, args.precision)},"
          f" {_fmt(interval.s_hi, args.precision)}]")
    return 0


def _cmd_simulate(args) -> int:
    spec = simulate.load_table_spec(args.spec)
    predicates = simulate.load_predicates(args.preds)
    report = simulate.compare_methods(spec, predicates, bucket_count=args.buckets)
    import csv as _csv

    with open(args.out, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["method", "plan", "total_evaluations", "diff_to_optimal",
                         "survivors", "wall_ms"])
        for o in report.outcomes:
            writer.writerow([o.method, " ".join(str(i + 1) for i in o.plan.order),
                             o.total_evaluations, o.diff_to_optimal, o.survivors,
                             f"{o.wall_ms:.3f}"])
    print(f"wrote {len(report.outcomes)} rows to {args.out}")
    for o in report.outcomes:
        print(f"{o.method}: total={o.total_evaluations} diff={o.diff_to_optimal}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="mroselect",
                     description="Minmax-regret ordering of selection operators")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_precision(p):
        p.add_argument("--precision", type=int, default=6,
                       help="significant digits for printed numbers")

    p = sub.add_parser("solve", help="brute-force minmax-regret plan")
    p.add_argument("--instance", required=True)
    p.add_argument("--no-prune", action="store_true",
                   help="disable dominance pruning")
    p.add_argument("--max-n", type=int, default=10,
                   help="refuse instances larger than this (default 10)")
    add_precision(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("heuristic", help="max-min insertion heuristic")
    p.add_argument("--instance", required=True)
    p.add_argument("--initial", default="dcw", choices=heuristic.INITIALS)
    p.add_argument("--phases", default="w+,w+",
                   help="comma-separated criteria from u,m+,m-,w+,w-")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--baseline", choices=("midpoint", "meanvalue"))
    add_precision(p)
    p.set_defaults(func=_cmd_heuristic)

    p = sub.add_parser("bench", help="run a seeded experiment, emit CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("estimate", help="selectivity intervals from statistics")
    p.add_argument("--hist", help="histogram JSON file")
    p.add_argument("--pred", help='range predicate, e.g. "X<126"')
    p.add_argument("--corpus", help="JSONL corpus of field-tagged text")
    p.add_argument("--keyword", help="substring keyword (>= 2 characters)")
    p.add_argument("--field", help="corpus field to estimate on")
    add_precision(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("simulate", help="actual-cost method comparison")
    p.add_argument("--spec", required=True, help="table spec JSON file")
    p.add_argument("--preds", required=True, help="predicates JSON file")
    p.add_argument("--buckets", type=int, default=estimate.DEFAULT_BUCKETS)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "estimate":
        if bool(args.hist) == bool(args.corpus):
            parser.error("estimate needs exactly one of --hist or --corpus")
        if args.hist and not args.pred:
            parser.error("--hist requires --pred")
        if args.corpus and not args.keyword:
            parser.error("--corpus requires --keyword")
    try:
        return args.func(args)
    except CapacityLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidInstanceError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
