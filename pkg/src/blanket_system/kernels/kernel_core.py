"""
Kernel Core

Builds, centers and parameterizes Gram matrices over arbitrary subsets
of variables. A subset is treated as one multivariate input: the
selected columns are concatenated into a single vector per sample.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np
from scipy.spatial.distance import pdist, squareform
from sklearn.metrics.pairwise import linear_kernel

from blanket_system.config.config import CONFIG
from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.logging.logger import get_logger
from blanket_system.schema import DataMatrix

logger = get_logger(__name__, CONFIG["logging"]["kernels"])


# sigma used when every pairwise distance is zero
DEGENERATE_BANDWIDTH = 1.0

SYMMETRY_RTOL = 1e-10

# |row sum| of a centered Gram, relative to n * max|entry|
CENTERING_RTOL = 1e-8


class KernelFamily(str, Enum):
    LINEAR = "linear"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class KernelSpec:
    """
    Kernel family, bandwidth policy and ridge regularization.

    `sigma=None` selects the median heuristic for the gaussian family;
    linear kernels ignore it.
    """

    family: KernelFamily = KernelFamily.LINEAR
    sigma: float | None = None
    epsilon: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))

        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise BlanketError(ErrorCode.BAD_KERNEL, f"epsilon must be > 0, got {self.epsilon}")

        if self.sigma is not None and not (np.isfinite(self.sigma) and self.sigma > 0):
            raise BlanketError(ErrorCode.BAD_KERNEL, f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    centered: bool = False

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float, copy=True)

        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise BlanketError(ErrorCode.DIMENSION_MISMATCH, f"Gram must be square, got {entries.shape}")

        scale = max(np.max(np.abs(entries), initial=0.0), 1.0)
        if not np.allclose(entries, entries.T, rtol=SYMMETRY_RTOL, atol=SYMMETRY_RTOL * scale):
            raise BlanketError(ErrorCode.BAD_DATA, "Gram matrix is not symmetric")

        if self.centered:
            n = entries.shape[0]
            bound = CENTERING_RTOL * n * np.max(np.abs(entries), initial=0.0)
            worst = float(np.max(np.abs(entries.sum(axis=1)), initial=0.0))
            if worst > bound:
                raise BlanketError(
                    ErrorCode.BAD_DATA,
                    f"Gram matrix labelled centered has row sums up to {worst:.3g} (bound {bound:.3g})"
                )

        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def _normalize_columns(data: DataMatrix, columns: Iterable[int]) -> list[int]:
    # sorted so the joint vector is independent of the caller's column order
    cols = sorted(set(int(c) for c in columns))

    if not cols:
        raise BlanketError(ErrorCode.EMPTY_SUBSET, "column subset is empty")

    bad = [c for c in cols if not 0 <= c < data.n_variables]
    if bad:
        raise BlanketError(ErrorCode.BAD_CONDITIONING, f"column indices out of range: {bad}")

    return cols


def median_bandwidth(data: DataMatrix, columns: Iterable[int]) -> float:
    """
    Median of the strictly positive pairwise Euclidean distances over
    `columns`. Constant data falls back to DEGENERATE_BANDWIDTH.
    """

    cols = _normalize_columns(data, columns)
    distances = pdist(data.columns(cols), metric="euclidean")
    distances = distances[distances > 0]

    if distances.size == 0:
        logger.warning(f"All pairwise distances are zero over columns {cols}; using sigma={DEGENERATE_BANDWIDTH}")
        return DEGENERATE_BANDWIDTH

    return float(np.median(distances))


def resolve_sigma(data: DataMatrix, columns: Iterable[int], spec: KernelSpec) -> float | None:
    if spec.family == KernelFamily.LINEAR:
        return None
    if spec.sigma is not None:
        return spec.sigma
    return median_bandwidth(data, columns)


def compute_gram(data: DataMatrix, columns: Iterable[int], spec: KernelSpec) -> GramMatrix:
    """
    Uncentered Gram matrix of the joint row vectors restricted to `columns`.

    Parameters
    ----------
    data : DataMatrix
    columns : iterable of int
        Non-empty set of variable indices.
    spec : KernelSpec
        Kernel family and bandwidth policy; the median heuristic is
        resolved over exactly these columns.

    Returns
    -------
    GramMatrix
        Uncentered, symmetric n x n matrix.
    """

    cols = _normalize_columns(data, columns)
    x = data.columns(cols)

    if spec.family == KernelFamily.LINEAR:
        k = linear_kernel(x)
    else:
        sigma = resolve_sigma(data, cols, spec)
        sq_dist = squareform(pdist(x, metric="sqeuclidean"))
        k = np.exp(-sq_dist / (2.0 * sigma ** 2))

    k = 0.5 * (k + k.T)

    return GramMatrix(k, centered=False)


def center(gram: GramMatrix) -> GramMatrix:
    """
    Return H K H with H = I - (1/n) 11^T.
    """

    if gram.centered:
        raise BlanketError(ErrorCode.ALREADY_CENTERED, "Gram matrix is already centered")

    return GramMatrix(_double_center(gram.entries), centered=True)


def _double_center(k: np.ndarray) -> np.ndarray:
    centered = k
    # two passes: row sums vanish to rounding at the centered scale
    for _ in range(2):
        centered = (
            centered
            - centered.mean(axis=0, keepdims=True)
            - centered.mean(axis=1, keepdims=True)
            + centered.mean()
        )
    return 0.5 * (centered + centered.T)


def centered_gram(data: DataMatrix, columns: Iterable[int], spec: KernelSpec) -> GramMatrix:
    return center(compute_gram(data, columns, spec))


def gram_factor(gram: GramMatrix) -> np.ndarray:
    """
    Square-root factor L with L L^T = G for a centered Gram.

    Eigen-directions with non-positive eigenvalues (rounding noise on a
    PSD matrix) are dropped, so L has as many columns as the numerical
    rank of G.
    """

    if not gram.centered:
        raise BlanketError(ErrorCode.NOT_CENTERED, "factor requires a centered Gram")

    eigvals, eigvecs = np.linalg.eigh(gram.entries)
    keep = eigvals > 0

    return eigvecs[:, keep] * np.sqrt(eigvals[keep])
