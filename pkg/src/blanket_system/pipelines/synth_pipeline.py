"""
Synthetic Dataset Pipeline

Generates one synthetic blanket dataset and writes the CSV plus its
truth sidecar (same stem, `.truth` suffix).
"""

from pathlib import Path

from blanket_system.config.config import CONFIG
from blanket_system.data.data_ingestion import truth_path_for, write_dataset, write_truth
from blanket_system.logging.logger import get_logger
from blanket_system.synthetic.synthetic_bench import SynthConfig, gen_mb_dataset

logger = get_logger(__name__, CONFIG["logging"]["synthetic"])


def run_synth_pipeline(cfg: SynthConfig, out_path: Path) -> tuple[Path, Path]:
    logger.info(f"--- Synth Pipeline Started | {cfg.model_dump()} ---")

    try:
        data, truth = gen_mb_dataset(cfg)

        out_path = Path(out_path)
        truth_path = truth_path_for(out_path)

        write_dataset(data, out_path)
        write_truth(truth, data, truth_path)

    except Exception as e:
        logger.exception(f"Synth pipeline failed: {e}")
        raise

    logger.info(f"--- Synth Pipeline Finished | data={out_path} | truth={truth_path} ---")

    return out_path, truth_path
