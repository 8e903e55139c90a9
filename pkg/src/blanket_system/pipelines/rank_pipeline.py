"""
Rank Pipeline

Ranks the variables of a dataset file against a named target, or runs
the IAMB baseline for a subset. Does not implement selection logic;
delegates to the selection package.
"""

from pathlib import Path
from typing import Sequence

from blanket_system.config.config import CONFIG
from blanket_system.data.data_ingestion import load_dataset
from blanket_system.data.result_store import write_ranking, write_subset
from blanket_system.kernels.dependence_measures import MeasureKind
from blanket_system.kernels.kernel_core import KernelSpec
from blanket_system.logging.logger import get_logger
from blanket_system.schema import DataMatrix
from blanket_system.selection.elimination import (
    EliminationResult,
    SubsetResult,
    backward_eliminate,
    bahsic_eliminate,
    forward_select,
)
from blanket_system.selection.iamb import iamb

logger = get_logger(__name__, CONFIG["logging"]["cli"])

MEASURES = {"f": MeasureKind.M1, "z": MeasureKind.M2, "hsic": MeasureKind.HSIC}


def run_rank_pipeline(
    data_path: Path,
    target_name: str,
    measure: str,
    spec: KernelSpec,
    beta: float = 0.0,
    direction: str = "backward",
    stop_at: int | None = None,
    discrete: Sequence[str] = (),
    standardize: bool = False,
    out_path: Path | None = None,
    n_jobs: int = 1,
) -> tuple[DataMatrix, EliminationResult]:
    """
    Execute ranking: load, rank, optionally persist.

    measure: "f" (M1), "z" (M2) or "hsic" (BAHSIC, backward only).
    """

    logger.info(f"--- Rank Pipeline Started | data={data_path} | target={target_name} | measure={measure} ---")

    try:
        data = load_dataset(data_path, discrete=discrete, standardize=standardize)
        target = data.index_of(target_name)
        kind = MEASURES[measure]

        if kind == MeasureKind.HSIC:
            result = bahsic_eliminate(data, target, spec, beta, n_jobs=n_jobs)
        elif direction == "forward":
            result = forward_select(data, target, kind, spec, stop_at, n_jobs=n_jobs)
        else:
            result = backward_eliminate(data, target, kind, spec, beta, n_jobs=n_jobs)

        if out_path is not None:
            write_ranking(result, data, measure, out_path)
            logger.info(f"Ranking written to {out_path}")

    except Exception as e:
        logger.exception(f"Rank pipeline failed: {e}")
        raise

    logger.info("--- Rank Pipeline Finished ---")

    return data, result


def run_iamb_pipeline(
    data_path: Path,
    target_name: str,
    alpha: float = 0.05,
    discrete: Sequence[str] = (),
    out_path: Path | None = None,
) -> tuple[DataMatrix, SubsetResult]:
    logger.info(f"--- IAMB Pipeline Started | data={data_path} | target={target_name} | alpha={alpha} ---")

    try:
        data = load_dataset(data_path, discrete=discrete)
        subset = iamb(data, data.index_of(target_name), alpha)

        if out_path is not None:
            write_subset(subset, data, out_path)

    except Exception as e:
        logger.exception(f"IAMB pipeline failed: {e}")
        raise

    logger.info("--- IAMB Pipeline Finished ---")

    return data, subset
