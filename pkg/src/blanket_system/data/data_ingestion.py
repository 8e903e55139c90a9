"""
Data Ingestion

Loads datasets and ground-truth files from disk and writes synthetic
datasets back out.

Dataset CSV: header of unique [A-Za-z0-9_] names, decimal values.
Truth file: `target=<name>` then `mb=<comma-separated names>`; several
such pairs make a multi-target truth file.
"""

from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd
from sklearn.preprocessing import StandardScaler

from blanket_system.config.config import CONFIG
from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.logging.logger import get_logger
from blanket_system.schema import DataMatrix, MarkovBlanketTruth

logger = get_logger(__name__, CONFIG["logging"]["cli"])

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"


def _locate_bad_value(raw: pd.DataFrame) -> tuple[int, str]:
    for col in raw.columns:
        parsed = pd.to_numeric(raw[col], errors="coerce")
        bad = parsed.isna() & raw[col].notna()
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            return row + 2, str(col)  # header is line 1
    return -1, ""


def standardize_columns(data: DataMatrix) -> DataMatrix:
    """
    Z-score every column (population sd). Constant columns become zero.
    """

    scaled = StandardScaler().fit_transform(data.values)
    return DataMatrix(scaled, data.column_names, data.column_kinds)


def load_dataset(
    data_path: Path,
    discrete: Sequence[str] = (),
    standardize: bool = False,
) -> DataMatrix:
    """
    Load a dataset CSV into a DataMatrix.

    Parameters
    ----------
    data_path : Path
    discrete : sequence of str
        Columns holding integer codes of discrete variables.
    standardize : bool
        Z-score every column before analysis.

    Returns
    -------
    DataMatrix
    """

    data_path = Path(data_path)

    if not data_path.exists():
        raise FileNotFoundError(f"Dataset not found: {data_path}")

    logger.info(f"Loading dataset from {data_path}")

    try:
        raw = pd.read_csv(data_path, dtype=str, keep_default_na=False, na_values=[])
    except pd.errors.ParserError as e:
        raise BlanketError(ErrorCode.PARSE_ERROR, f"{data_path}: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise BlanketError(ErrorCode.PARSE_ERROR, f"{data_path}: empty file") from e

    line, col = _locate_bad_value(raw)
    if line > 0:
        raise BlanketError(ErrorCode.PARSE_ERROR, f"{data_path}: line {line}: non-numeric value in column '{col}'")

    # float() parsing keeps 17-digit values bit-exact
    df = raw.astype(float)

    data = DataMatrix.from_frame(df, discrete=discrete)

    if standardize:
        data = standardize_columns(data)

    logger.info(f"Dataset loaded | rows = {data.n_samples} | cols = {data.n_variables}")

    return data


def write_dataset(data: DataMatrix, data_path: Path) -> None:
    data_path = Path(data_path)
    data_path.parent.mkdir(parents=True, exist_ok=True)

    data.to_frame().to_csv(data_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    logger.info(f"Dataset written to {data_path}")


def truth_path_for(data_path: Path) -> Path:
    return Path(data_path).with_suffix(".truth")


def write_truth(truth: MarkovBlanketTruth, data: DataMatrix, truth_path: Path) -> None:
    names = data.column_names
    mb_names = ",".join(names[v] for v in sorted(truth.mb))

    with open(truth_path, "w") as f:
        f.write(f"target={names[truth.target]}\nmb={mb_names}\n")


def read_truth_blocks(truth_path: Path) -> list[tuple[str, list[str]]]:
    """
    Parse a (possibly multi-target) truth file into (target, mb names)
    pairs, keeping file order.
    """

    truth_path = Path(truth_path)

    if not truth_path.exists():
        raise FileNotFoundError(f"Truth file not found: {truth_path}")

    with open(truth_path, "r") as f:
        lines = [line.strip() for line in f if line.strip()]

    blocks: list[tuple[str, list[str]]] = []
    for i in range(0, len(lines), 2):
        pair = lines[i:i + 2]
        if len(pair) != 2 or not pair[0].startswith("target=") or not pair[1].startswith("mb="):
            raise BlanketError(
                ErrorCode.PARSE_ERROR,
                f"{truth_path}: line {i + 1}: expected 'target=<name>' followed by 'mb=<names>'"
            )

        target = pair[0][len("target="):].strip()
        mb = [name.strip() for name in pair[1][len("mb="):].split(",") if name.strip()]
        blocks.append((target, mb))

    if not blocks:
        raise BlanketError(ErrorCode.PARSE_ERROR, f"{truth_path}: no target block")

    return blocks


def resolve_truth(target: str, mb_names: Sequence[str], column_names: Sequence[str]) -> MarkovBlanketTruth:
    """
    Map names to indices of `column_names`; unknown names are reported
    all at once.
    """

    index = {name: i for i, name in enumerate(column_names)}
    unknown = [name for name in [target, *mb_names] if name not in index]

    if unknown:
        raise BlanketError(ErrorCode.NAME_MISMATCH, f"names not found in dataset: {unknown}")

    return MarkovBlanketTruth(index[target], frozenset(index[name] for name in mb_names))
