"""
Score Pipeline

Scores a saved ranking/subset against a truth file, and surveys every
target of a dataset with a multi-target truth file.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from blanket_system.config.config import CONFIG
from blanket_system.data.data_ingestion import load_dataset, read_truth_blocks, resolve_truth
from blanket_system.data.result_store import read_selection, selection_from_payload
from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.evaluation.metrics import score_ranking, score_subset
from blanket_system.kernels.dependence_measures import MeasureKind
from blanket_system.kernels.kernel_core import KernelSpec
from blanket_system.logging.logger import get_logger
from blanket_system.pipelines.rank_pipeline import MEASURES
from blanket_system.selection.elimination import (
    EliminationResult,
    backward_eliminate,
    bahsic_eliminate,
)

logger = get_logger(__name__, CONFIG["logging"]["cli"])


def _universe(payload: dict, mb_names: Sequence[str], target: str) -> list[str]:
    names = list(payload.get("order", payload.get("members", [])))
    for name in [target, *mb_names]:
        if name not in names:
            names.append(name)
    return names


def run_score_pipeline(truth_path: Path, selection_path: Path) -> dict[str, float]:
    """
    Metrics of one saved selection. Rankings give mean_mb_rank and
    accuracy; subsets give accuracy.
    """

    logger.info(f"--- Score Pipeline Started | truth={truth_path} | selection={selection_path} ---")

    try:
        target_name, mb_names = read_truth_blocks(truth_path)[0]
        payload = read_selection(selection_path)

        if payload["target"] != target_name:
            raise BlanketError(
                ErrorCode.NAME_MISMATCH,
                f"selection target '{payload['target']}' differs from truth target '{target_name}'"
            )

        selected = list(payload.get("order", payload.get("members", [])))
        unknown = [name for name in mb_names if name not in selected] if "order" in payload else []
        if unknown:
            raise BlanketError(ErrorCode.NAME_MISMATCH, f"blanket names missing from ranking: {unknown}")

        names = _universe(payload, mb_names, target_name)
        truth = resolve_truth(target_name, mb_names, names)
        selection = selection_from_payload(payload, names)

        if isinstance(selection, EliminationResult):
            metrics = score_ranking(selection, truth)
        else:
            metrics = score_subset(selection, truth)

    except Exception as e:
        logger.exception(f"Score pipeline failed: {e}")
        raise

    logger.info(f"--- Score Pipeline Finished | {metrics} ---")

    return metrics


@dataclass(frozen=True)
class SurveyRow:
    target: str
    mb_size: int
    mean_mb_rank: float
    accuracy: float


def run_survey_pipeline(
    data_path: Path,
    truth_path: Path,
    measure: str,
    spec: KernelSpec,
    beta: float = 0.0,
    discrete: Sequence[str] = (),
    standardize: bool = False,
    n_jobs: int = 1,
) -> tuple[list[SurveyRow], dict[str, float]]:
    """
    Rank every target listed in a multi-target truth file and average
    the scores. Targets whose known blanket is empty are skipped.
    """

    logger.info(f"--- Survey Pipeline Started | data={data_path} | truth={truth_path} ---")

    try:
        data = load_dataset(data_path, discrete=discrete, standardize=standardize)
        blocks = read_truth_blocks(truth_path)
        kind = MEASURES[measure]

        rows = []
        for target_name, mb_names in blocks:
            if not mb_names:
                logger.warning(f"Skipping target {target_name}: known blanket is empty")
                continue

            truth = resolve_truth(target_name, mb_names, data.column_names)

            if kind == MeasureKind.HSIC:
                result = bahsic_eliminate(data, truth.target, spec, beta, n_jobs=n_jobs)
            else:
                result = backward_eliminate(data, truth.target, kind, spec, beta, n_jobs=n_jobs)

            metrics = score_ranking(result, truth)
            rows.append(SurveyRow(target_name, len(truth.mb), metrics["mean_mb_rank"], metrics["accuracy"]))
            logger.info(f"Survey {target_name} | {metrics}")

        if not rows:
            raise BlanketError(ErrorCode.EMPTY_TRUTH, f"{truth_path}: every listed blanket is empty")

        summary = {
            "targets": float(len(rows)),
            "mean_mb_rank": float(np.mean([r.mean_mb_rank for r in rows])),
            "accuracy": float(np.mean([r.accuracy for r in rows])),
        }

    except Exception as e:
        logger.exception(f"Survey pipeline failed: {e}")
        raise

    logger.info(f"--- Survey Pipeline Finished | {summary} ---")

    return rows, summary
