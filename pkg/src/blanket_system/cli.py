"""
Command-line entry point.

    blanket rank   --data d.csv --target Y --measure f --kernel linear [--out r.json]
    blanket iamb   --data d.csv --target Y --alpha 0.05 [--out s.json]
    blanket synth  --out d.csv [--samples 500 --noise 1 --extraneous 10 ...]
    blanket bench  [--config samples.yaml] [--experiment samples --trials 30 ...]
    blanket score  --truth d.truth --ranking r.json
    blanket survey --data d.csv --truth graph.truth --measure f

Exit code 0 on success, 1 when a benchmark produced error rows, 2 on
invalid input or unwritable output.
"""

import argparse
import sys
from pathlib import Path

from pydantic import ValidationError

from blanket_system.config.config import CONFIG
from blanket_system.config.experiment import ALGORITHMS, load_experiment_config
from blanket_system.errors import BlanketError
from blanket_system.kernels.kernel_core import KernelSpec
from blanket_system.logging.logger import get_logger
from blanket_system.pipelines.bench_pipeline import run_bench_pipeline
from blanket_system.pipelines.rank_pipeline import MEASURES, run_iamb_pipeline, run_rank_pipeline
from blanket_system.pipelines.score_pipeline import run_score_pipeline, run_survey_pipeline
from blanket_system.pipelines.synth_pipeline import run_synth_pipeline
from blanket_system.synthetic.synthetic_bench import EXPERIMENTS, SynthConfig

logger = get_logger(__name__, CONFIG["logging"]["cli"])

EXIT_OK = 0
EXIT_ERROR_ROWS = 1
EXIT_USAGE = 2


def _comma_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _add_kernel_flags(parser: argparse.ArgumentParser, defaults: bool = True) -> None:
    parser.add_argument("--kernel", choices=["linear", "gaussian"],
                        default=CONFIG["kernel"]["family"] if defaults else None)
    parser.add_argument("--sigma", type=float, default=None,
                        help="Fixed gaussian bandwidth; omitted = median heuristic.")
    parser.add_argument("--epsilon", type=float,
                        default=CONFIG["kernel"]["epsilon"] if defaults else None)
    parser.add_argument("--beta", type=float,
                        default=CONFIG["elimination"]["beta"] if defaults else None,
                        help="Fraction rule: remove 1 - beta of X_S per iteration (0 = one at a time).")


def _add_ingestion_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--discrete", type=_comma_list, default=[],
                        help="Comma-separated names of discrete-coded columns.")
    parser.add_argument("--standardize", action="store_true",
                        help="Z-score columns before ranking.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blanket",
        description="Markov blanket discovery by kernel conditional dependence."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rank = sub.add_parser("rank", help="Rank variables by backward elimination.")
    rank.add_argument("--data", type=Path, required=True)
    rank.add_argument("--target", required=True)
    rank.add_argument("--measure", choices=sorted(MEASURES), default="f")
    rank.add_argument("--direction", choices=["backward", "forward"], default="backward")
    rank.add_argument("--stop-at", type=int, default=None)
    rank.add_argument("--n-jobs", type=int, default=CONFIG["elimination"]["n_jobs"])
    rank.add_argument("--out", type=Path, default=None)
    _add_kernel_flags(rank)
    _add_ingestion_flags(rank)

    iamb = sub.add_parser("iamb", help="IAMB baseline with Fisher's Z test.")
    iamb.add_argument("--data", type=Path, required=True)
    iamb.add_argument("--target", required=True)
    iamb.add_argument("--alpha", type=float, default=CONFIG["iamb"]["alpha"])
    iamb.add_argument("--discrete", type=_comma_list, default=[])
    iamb.add_argument("--out", type=Path, default=None)

    synth_defaults = CONFIG["synthetic"]
    synth = sub.add_parser("synth", help="Write a synthetic blanket dataset and truth file.")
    synth.add_argument("--out", type=Path, required=True)
    synth.add_argument("--samples", type=int, default=synth_defaults["n_samples"])
    synth.add_argument("--noise", type=float, default=synth_defaults["noise_sd"])
    synth.add_argument("--extraneous", type=int, default=synth_defaults["n_extraneous"])
    synth.add_argument("--edges", type=int, default=synth_defaults["extra_edges"])
    synth.add_argument("--weight", type=float, default=synth_defaults["mb_weight"])
    synth.add_argument("--spouses", choices=["one", "both"], default="one")
    synth.add_argument("--seed", type=int, default=synth_defaults["seed"])

    bench = sub.add_parser("bench", help="Run a synthetic sweep over algorithms.")
    bench.add_argument("--config", type=Path, default=None)
    bench.add_argument("--experiment", choices=EXPERIMENTS, default=None)
    bench.add_argument("--algorithms", type=_comma_list, default=None,
                       help=f"Comma-separated subset of {', '.join(ALGORITHMS)}.")
    bench.add_argument("--grid", type=str, default=None, help="Comma-separated grid values.")
    bench.add_argument("--trials", type=int, default=None)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--alpha", type=float, default=None)
    bench.add_argument("--samples", type=int, default=None)
    bench.add_argument("--fixed-samples", type=int, default=None)
    bench.add_argument("--n-jobs", type=int, default=None)
    bench.add_argument("--standardize", action=argparse.BooleanOptionalAction, default=None,
                       help="Z-score each generated dataset before the algorithms run.")
    bench.add_argument("--out", type=Path, default=None)
    _add_kernel_flags(bench, defaults=False)

    score = sub.add_parser("score", help="Score a ranking or subset file against a truth file.")
    score.add_argument("--truth", type=Path, required=True)
    score.add_argument("--ranking", type=Path, required=True, help="Ranking or subset JSON file.")

    survey = sub.add_parser("survey", help="Rank every target of a multi-target truth file.")
    survey.add_argument("--data", type=Path, required=True)
    survey.add_argument("--truth", type=Path, required=True)
    survey.add_argument("--measure", choices=sorted(MEASURES), default="f")
    survey.add_argument("--n-jobs", type=int, default=CONFIG["elimination"]["n_jobs"])
    _add_kernel_flags(survey)
    _add_ingestion_flags(survey)

    return parser


def _kernel_spec(args: argparse.Namespace) -> KernelSpec:
    return KernelSpec(family=args.kernel, sigma=args.sigma, epsilon=args.epsilon)


def cmd_rank(args: argparse.Namespace) -> int:
    data, result = run_rank_pipeline(
        args.data, args.target, args.measure, _kernel_spec(args),
        beta=args.beta, direction=args.direction, stop_at=args.stop_at,
        discrete=args.discrete, standardize=args.standardize,
        out_path=args.out, n_jobs=args.n_jobs,
    )

    label = "ascending" if result.direction.value == "backward" else "descending"
    print(f"target: {args.target}")
    print(f"order ({label}, {result.direction.value}):")
    for step, (var, value) in enumerate(zip(result.order, result.step_values), start=1):
        print(f"{step:>4}  {data.column_names[var]:<20} {value:.17g}")

    return EXIT_OK


def cmd_iamb(args: argparse.Namespace) -> int:
    data, subset = run_iamb_pipeline(args.data, args.target, args.alpha, args.discrete, args.out)
    print(f"target: {args.target}")
    print("members: " + ",".join(data.column_names[v] for v in sorted(subset.members)))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = SynthConfig(
        n_samples=args.samples,
        noise_sd=args.noise,
        n_extraneous=args.extraneous,
        extra_edges=args.edges,
        mb_weight=args.weight,
        seed=args.seed,
        spouses_per_child=args.spouses,
    )
    data_path, truth_path = run_synth_pipeline(cfg, args.out)
    print(f"data: {data_path}")
    print(f"truth: {truth_path}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    overrides = {
        "experiment": args.experiment,
        "algorithms": args.algorithms,
        "grid": args.grid,
        "trials": args.trials,
        "seed": args.seed,
        "alpha": args.alpha,
        "samples": args.samples,
        "fixed_samples": args.fixed_samples,
        "n_jobs": args.n_jobs,
        "standardize": args.standardize,
        "out": args.out,
        "kernel": args.kernel,
        "sigma": args.sigma,
        "epsilon": args.epsilon,
        "beta": args.beta,
    }
    cfg = load_experiment_config(args.config, overrides)

    records, records_path, aggregate_path = run_bench_pipeline(cfg)
    errors = [r for r in records if r.status == "error"]

    print(f"records: {records_path} ({len(records)})")
    print(f"aggregate: {aggregate_path}")

    if errors:
        print(f"error rows: {len(errors)}", file=sys.stderr)
        return EXIT_ERROR_ROWS

    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    metrics = run_score_pipeline(args.truth, args.ranking)
    for name, value in metrics.items():
        print(f"{name}: {value:.17g}")
    return EXIT_OK


def cmd_survey(args: argparse.Namespace) -> int:
    rows, summary = run_survey_pipeline(
        args.data, args.truth, args.measure, _kernel_spec(args),
        beta=args.beta, discrete=args.discrete, standardize=args.standardize, n_jobs=args.n_jobs,
    )
    for row in rows:
        print(f"{row.target:<20} mb={row.mb_size:<3} mean_mb_rank={row.mean_mb_rank:.6g} accuracy={row.accuracy:.6g}")
    print(f"mean over {int(summary['targets'])} targets | mean_mb_rank={summary['mean_mb_rank']:.6g} "
          f"| accuracy={summary['accuracy']:.6g}")
    return EXIT_OK


COMMANDS = {
    "rank": cmd_rank,
    "iamb": cmd_iamb,
    "synth": cmd_synth,
    "bench": cmd_bench,
    "score": cmd_score,
    "survey": cmd_survey,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        return COMMANDS[args.command](args)
    except (BlanketError, FileNotFoundError, ValidationError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
