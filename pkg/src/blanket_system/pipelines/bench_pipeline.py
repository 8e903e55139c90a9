"""
Benchmark Pipeline

Runs one synthetic sweep: for every (grid value x trial) a dataset is
generated, every configured algorithm is run on it and scored against
the known blanket. Ranking algorithms report mean_mb_rank and clipped
accuracy; IAMB reports accuracy only.
Generated columns are z-scored first unless `standardize` is off.

A failing (trial, algorithm) pair becomes an error row; the sweep goes on.
"""

import time
from pathlib import Path

from joblib import Parallel, delayed

from blanket_system.config.config import CONFIG
from blanket_system.config.experiment import ExperimentConfig
from blanket_system.data.data_ingestion import standardize_columns
from blanket_system.evaluation.metrics import score_ranking, score_subset
from blanket_system.data.result_store import (
    ResultRecord,
    aggregate_table,
    write_aggregate,
    write_records,
)
from blanket_system.kernels.dependence_measures import MeasureKind
from blanket_system.kernels.kernel_core import KernelSpec
from blanket_system.logging.logger import get_logger
from blanket_system.schema import DataMatrix, MarkovBlanketTruth
from blanket_system.selection.elimination import (
    backward_eliminate,
    bahsic_eliminate,
    forward_select,
)
from blanket_system.selection.iamb import iamb
from blanket_system.synthetic.synthetic_bench import (
    SweepTask,
    SynthConfig,
    gen_mb_dataset,
    sweep_configs,
)

logger = get_logger(__name__, CONFIG["logging"]["bench"])

RECORDS_FILE = "results.jsonl"
AGGREGATE_FILE = "aggregate.csv"


def run_algorithm(
    algorithm: str,
    data: DataMatrix,
    truth: MarkovBlanketTruth,
    spec: KernelSpec,
    beta: float,
    alpha: float,
) -> dict[str, float]:
    """
    Run one algorithm on one dataset and return its metrics.
    """

    target = truth.target

    if algorithm == "proposed-f":
        return score_ranking(backward_eliminate(data, target, MeasureKind.M1, spec, beta), truth)
    if algorithm == "proposed-z":
        return score_ranking(backward_eliminate(data, target, MeasureKind.M2, spec, beta), truth)
    if algorithm == "bahsic":
        return score_ranking(bahsic_eliminate(data, target, spec, beta), truth)
    if algorithm == "forward-f":
        return score_ranking(forward_select(data, target, MeasureKind.M1, spec), truth)
    if algorithm == "forward-z":
        return score_ranking(forward_select(data, target, MeasureKind.M2, spec), truth)
    if algorithm == "iamb":
        return score_subset(iamb(data, target, alpha), truth)

    raise ValueError(f"unknown algorithm '{algorithm}'")


def base_synth_config(cfg: ExperimentConfig) -> SynthConfig:
    return SynthConfig(
        n_samples=cfg.samples,
        noise_sd=cfg.noise,
        n_extraneous=cfg.extraneous,
        extra_edges=cfg.edges,
        mb_weight=cfg.weight,
        seed=cfg.seed,
        spouses_per_child=cfg.spouses,
    )


def kernel_spec(cfg: ExperimentConfig) -> KernelSpec:
    return KernelSpec(family=cfg.kernel, sigma=cfg.sigma, epsilon=cfg.epsilon)


def run_trial(task: SweepTask, cfg: ExperimentConfig) -> list[ResultRecord]:
    """
    All algorithms on one generated dataset.
    """

    common = {
        "experiment": cfg.experiment,
        "grid_value": task.grid_value,
        "trial": task.trial,
        "seed": task.config.seed,
    }

    try:
        data, truth = gen_mb_dataset(task.config)
        if cfg.standardize:
            data = standardize_columns(data)
    except Exception as e:
        logger.exception(f"Dataset generation failed | grid={task.grid_value} | trial={task.trial}: {e}")
        return [
            ResultRecord(**common, algorithm=a, metric="error", wall_time_ms=0.0, status="error", message=str(e))
            for a in cfg.algorithms
        ]

    spec = kernel_spec(cfg)
    records = []

    for algorithm in cfg.algorithms:
        start = time.perf_counter()

        try:
            metrics = run_algorithm(algorithm, data, truth, spec, cfg.beta, cfg.alpha)
        except Exception as e:
            elapsed = (time.perf_counter() - start) * 1000.0
            logger.error(f"{algorithm} failed | grid={task.grid_value} | trial={task.trial}: {e}")
            records.append(
                ResultRecord(**common, algorithm=algorithm, metric="error", wall_time_ms=elapsed,
                             status="error", message=str(e))
            )
            continue

        elapsed = (time.perf_counter() - start) * 1000.0
        for metric, value in metrics.items():
            records.append(
                ResultRecord(**common, algorithm=algorithm, metric=metric, value=value, wall_time_ms=elapsed)
            )

    return records


def run_bench_pipeline(cfg: ExperimentConfig) -> tuple[list[ResultRecord], Path, Path]:
    """
    Execute a sweep and write the record stream and aggregate table.

    Returns
    -------
    tuple[list[ResultRecord], Path, Path]
        Canonically ordered records, records path, aggregate path.
    """

    logger.info(f"--- Bench Pipeline Started | experiment={cfg.experiment} | algorithms={cfg.algorithms} ---")

    try:
        tasks = list(
            sweep_configs(cfg.experiment, cfg.resolved_grid(), base_synth_config(cfg), cfg.trials, cfg.fixed_samples)
        )
        logger.info(f"{len(tasks)} datasets x {len(cfg.algorithms)} algorithms")

        batches = Parallel(n_jobs=cfg.n_jobs)(delayed(run_trial)(task, cfg) for task in tasks)
        records = [record for batch in batches for record in batch]

        out_dir = Path(cfg.out)
        records_path = out_dir / RECORDS_FILE
        aggregate_path = out_dir / AGGREGATE_FILE

        ordered = write_records(records, records_path)
        write_aggregate(aggregate_table(ordered), aggregate_path)

    except Exception as e:
        logger.exception(f"Bench pipeline failed: {e}")
        raise

    errors = sum(r.status == "error" for r in ordered)
    logger.info(f"--- Bench Pipeline Finished | records={len(ordered)} | errors={errors} ---")

    return ordered, records_path, aggregate_path
