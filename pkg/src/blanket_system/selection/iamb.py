"""
IAMB baseline with Fisher's Z test on partial correlations.

Grow: add the candidate with the largest |partial correlation| with Y
given the current blanket, while it is significant.
Shrink: drop members that are independent of Y given the other members.
The two phases alternate until neither changes the blanket.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm

from blanket_system.config.config import CONFIG
from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.logging.logger import get_logger
from blanket_system.schema import ColumnKind, DataMatrix
from blanket_system.selection.elimination import SubsetResult

logger = get_logger(__name__, CONFIG["logging"]["selection"])

# keeps atanh finite when |r| rounds to 1
MAX_ABS_CORRELATION = 1.0 - 1e-12


@dataclass(frozen=True)
class FisherZResult:
    statistic: float

    def significant_at(self, alpha: float) -> bool:
        _check_alpha(alpha)
        return bool(abs(self.statistic) > norm.ppf(1.0 - alpha / 2.0))


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise BlanketError(ErrorCode.BAD_ALPHA, f"alpha must be in (0, 1), got {alpha}")


def fisher_z(r: float, n: int, cond_size: int) -> FisherZResult:
    """
    z = atanh(r) * sqrt(n - |S| - 3), compared two-sided against the
    normal quantile.
    """

    dof = n - cond_size - 3
    if dof <= 0:
        raise BlanketError(
            ErrorCode.TOO_FEW_SAMPLES,
            f"Fisher Z needs n - |S| - 3 > 0 (n={n}, |S|={cond_size})"
        )

    if not -1.0 < r < 1.0:
        raise BlanketError(ErrorCode.BAD_DATA, f"partial correlation must be in (-1, 1), got {r}")

    return FisherZResult(float(np.arctanh(r) * np.sqrt(dof)))


def partial_correlation(corr: np.ndarray, i: int, j: int, given: Sequence[int]) -> float:
    """
    Partial correlation of i and j given `given`, read off the inverse of
    the correlation submatrix.
    """

    idx = [i, j, *given]
    sub = corr[np.ix_(idx, idx)]

    if not np.all(np.isfinite(sub)) or np.linalg.matrix_rank(sub) < len(idx):
        raise BlanketError(
            ErrorCode.SINGULAR_CONDITIONING,
            f"singular correlation submatrix for ({i}, {j} | {list(given)})"
        )

    precision = np.linalg.inv(sub)
    r = -precision[0, 1] / np.sqrt(precision[0, 0] * precision[1, 1])

    return float(np.clip(r, -MAX_ABS_CORRELATION, MAX_ABS_CORRELATION))


class _Tester:
    def __init__(self, data: DataMatrix, target: int, alpha: float):
        with np.errstate(invalid="ignore", divide="ignore"):
            self.corr = np.corrcoef(data.values, rowvar=False)
        self.corr = np.atleast_2d(self.corr)
        self.n = data.n_samples
        self.target = target
        self.alpha = alpha

    def association(self, var: int, given: Sequence[int]) -> tuple[float, bool]:
        """|partial correlation| and significance; singular sets count as independent."""
        try:
            r = partial_correlation(self.corr, var, self.target, given)
            significant = fisher_z(r, self.n, len(given)).significant_at(self.alpha)
        except BlanketError as e:
            if e.code not in (ErrorCode.SINGULAR_CONDITIONING, ErrorCode.TOO_FEW_SAMPLES):
                raise
            logger.warning(f"Treating test as independence: {e}")
            return 0.0, False

        return abs(r), significant


def _grow(tester: _Tester, blanket: list[int], candidates: list[int]) -> bool:
    changed = False

    while True:
        pool = [v for v in candidates if v not in blanket]
        if not pool:
            return changed

        scored = [(v, *tester.association(v, blanket)) for v in pool]
        var, strength, significant = max(scored, key=lambda s: (s[1], -s[0]))

        if not significant:
            return changed

        logger.debug(f"IAMB grow: add {var} (|r|={strength:.4f})")
        blanket.append(var)
        changed = True


def _shrink(tester: _Tester, blanket: list[int]) -> bool:
    changed = False

    for var in list(blanket):
        rest = [v for v in blanket if v != var]
        _, significant = tester.association(var, rest)

        if not significant:
            logger.debug(f"IAMB shrink: remove {var}")
            blanket.remove(var)
            changed = True

    return changed


def iamb(data: DataMatrix, target: int, alpha: float = 0.05) -> SubsetResult:
    """
    Incremental association Markov blanket with Fisher's Z test.

    Returns
    -------
    SubsetResult
        Members such that each is significant given the others and every
        excluded variable is non-significant given the members. When grow
        and shrink cycle, only the first property is guaranteed.
    """

    _check_alpha(alpha)
    candidates = data.non_target(target)

    discrete = [data.column_names[j] for j in range(data.n_variables) if data.column_kinds[j] == ColumnKind.DISCRETE]
    if discrete:
        logger.warning(f"IAMB assumes continuous data; discrete columns present: {discrete}")

    if not candidates:
        return SubsetResult(frozenset(), target)

    tester = _Tester(data, target, alpha)
    blanket: list[int] = []
    seen: set[frozenset[int]] = set()

    while True:
        grew = _grow(tester, blanket, candidates)
        shrank = _shrink(tester, blanket)

        if not (grew or shrank):
            break

        state = frozenset(blanket)
        if state in seen:
            logger.warning(
                f"IAMB grow/shrink cycle for {data.column_names[target]}; excluded variables may still "
                f"test dependent on it after the final shrink"
            )
            while _shrink(tester, blanket):
                pass
            break
        seen.add(state)

    logger.info(f"IAMB blanket of {data.column_names[target]}: {[data.column_names[v] for v in sorted(blanket)]}")

    return SubsetResult(frozenset(blanket), target)
