"""
Elimination

Feature ranking by kernel conditional dependence:

- backward_eliminate: repeatedly drop the variable whose removal from the
  conditioning set X_S leaves the smallest residual dependence (M1/M2),
  until X_S is empty. Output is in ascending importance.
- forward_select: greedily add the variable whose inclusion minimizes the
  measure. Output is in descending importance.
- bahsic_eliminate: backward elimination keeping the feature set with the
  largest HSIC against the target.

Ties are broken by the lowest variable index.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from joblib import Parallel, delayed

from blanket_system.config.config import CONFIG
from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.kernels.dependence_measures import MeasureKind, TargetKernel
from blanket_system.kernels.kernel_core import KernelSpec
from blanket_system.logging.logger import get_logger
from blanket_system.schema import DataMatrix

logger = get_logger(__name__, CONFIG["logging"]["selection"])


class Direction(str, Enum):
    BACKWARD = "backward"
    FORWARD = "forward"


@dataclass(frozen=True)
class EliminationResult:
    """
    order : variable indices; first entry is the least important for
        backward results and the most important for forward results.
    step_values : the measure value that decided each entry of `order`.
    """

    order: tuple[int, ...]
    step_values: tuple[float, ...]
    direction: Direction
    target: int | None = None

    def __post_init__(self):
        if len(self.order) != len(self.step_values):
            raise BlanketError(ErrorCode.BAD_ORDER, "order and step_values differ in length")
        if len(set(self.order)) != len(self.order):
            raise BlanketError(ErrorCode.BAD_ORDER, f"repeated variables in order {self.order}")

    def ascending(self) -> tuple[int, ...]:
        """Order from least to most important."""
        if self.direction == Direction.BACKWARD:
            return self.order
        return tuple(reversed(self.order))


@dataclass(frozen=True)
class SubsetResult:
    members: frozenset[int]
    target: int | None = None

    def __post_init__(self):
        members = frozenset(int(m) for m in self.members)
        if self.target is not None and self.target in members:
            raise BlanketError(ErrorCode.BAD_TARGET, "target cannot be a subset member")
        object.__setattr__(self, "members", members)


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta < 1.0:
        raise BlanketError(ErrorCode.BAD_BETA, f"batch fraction must be in [0, 1), got {beta}")


def _check_conditional(kind: MeasureKind) -> MeasureKind:
    kind = MeasureKind(kind)
    if not kind.is_conditional:
        raise BlanketError(ErrorCode.BAD_MEASURE, f"{kind.value} is not a conditional measure")
    return kind


def removal_count(remaining: int, beta: float) -> int:
    """
    Variables dropped in one iteration: exactly one when beta == 0,
    otherwise ceil((1 - beta) * |X_S|) (at least one).
    """
    if beta == 0.0:
        return 1
    return max(1, math.ceil((1.0 - beta) * remaining))


def _score_candidates(
    target_kernel: TargetKernel,
    kind: MeasureKind,
    data: DataMatrix,
    subsets: Sequence[list[int]],
    spec: KernelSpec,
    n_jobs: int,
) -> list[float]:
    if n_jobs == 1:
        return [target_kernel.score(kind, data, s, spec) for s in subsets]

    return Parallel(n_jobs=n_jobs)(
        delayed(target_kernel.score)(kind, data, s, spec) for s in subsets
    )


def _rank_candidates(candidates: list[int], scores: list[float], maximize: bool) -> list[tuple[int, float]]:
    sign = -1.0 if maximize else 1.0
    return sorted(zip(candidates, scores), key=lambda cs: (sign * cs[1], cs[0]))


def held_out_scores(
    data: DataMatrix,
    target: int,
    remaining: Sequence[int],
    kind: MeasureKind,
    spec: KernelSpec,
    target_spec: KernelSpec | None = None,
    n_jobs: int = 1,
) -> dict[int, float]:
    """
    Measure value with each remaining variable held out of X_S.
    """

    target_kernel = TargetKernel(data, target, target_spec or spec)
    remaining = sorted(remaining)
    subsets = [[v for v in remaining if v != u] for u in remaining]
    scores = _score_candidates(target_kernel, MeasureKind(kind), data, subsets, spec, n_jobs)

    return dict(zip(remaining, scores))


def _eliminate(
    data: DataMatrix,
    target: int,
    kind: MeasureKind,
    spec: KernelSpec,
    target_spec: KernelSpec | None,
    beta: float,
    maximize: bool,
    n_jobs: int,
) -> EliminationResult:
    remaining = data.non_target(target)
    target_kernel = TargetKernel(data, target, target_spec or spec)

    order: list[int] = []
    values: list[float] = []
    iteration = 0

    while remaining:
        subsets = [[v for v in remaining if v != u] for u in remaining]
        scores = _score_candidates(target_kernel, kind, data, subsets, spec, n_jobs)

        ranked = _rank_candidates(remaining, scores, maximize)
        removed = ranked[: removal_count(len(remaining), beta)]

        for var, value in removed:
            order.append(var)
            values.append(value)

        dropped = {var for var, _ in removed}
        remaining = [v for v in remaining if v not in dropped]
        iteration += 1

        logger.info(
            f"{kind.value} iteration {iteration} | removed={[data.column_names[v] for v, _ in removed]} "
            f"| value={removed[0][1]:.6g} | remaining={len(remaining)}"
        )

    return EliminationResult(tuple(order), tuple(values), Direction.BACKWARD, target)


def backward_eliminate(
    data: DataMatrix,
    target: int,
    kind: MeasureKind = MeasureKind.M1,
    spec: KernelSpec | None = None,
    beta: float = 0.0,
    target_spec: KernelSpec | None = None,
    n_jobs: int = 1,
) -> EliminationResult:
    """
    Backward elimination ranking with a conditional measure.

    Parameters
    ----------
    data : DataMatrix
    target : int
        Column index of Y.
    kind : MeasureKind
        M1 or M2.
    spec : KernelSpec
        Kernel for X_S (and for Y unless `target_spec` is given). With the
        median heuristic, sigma is re-resolved on every evaluated subset.
    beta : float
        Batch fraction in [0, 1). 0 removes the single argmin per
        iteration; otherwise 1 - beta of X_S is removed per iteration,
        following the "remove 1 - beta of X_S" reading.
    n_jobs : int
        joblib workers for the held-out evaluations of one iteration.

    Returns
    -------
    EliminationResult
        Ascending order: first entry eliminated first (least important).
    """

    kind = _check_conditional(kind)
    _check_beta(beta)
    data.check_target(target)

    return _eliminate(data, target, kind, spec or KernelSpec(), target_spec, beta, False, n_jobs)


def forward_select(
    data: DataMatrix,
    target: int,
    kind: MeasureKind = MeasureKind.M1,
    spec: KernelSpec | None = None,
    stop_at: int | None = None,
    target_spec: KernelSpec | None = None,
    n_jobs: int = 1,
) -> EliminationResult:
    """
    Greedy forward selection; `stop_at=None` selects every variable.
    """

    kind = _check_conditional(kind)
    spec = spec or KernelSpec()
    candidates = data.non_target(target)

    if stop_at is None:
        stop_at = len(candidates)
    if not 1 <= stop_at <= len(candidates):
        raise BlanketError(ErrorCode.BAD_STOP, f"stop_at must be in [1, {len(candidates)}], got {stop_at}")

    target_kernel = TargetKernel(data, target, target_spec or spec)
    selected: list[int] = []
    values: list[float] = []

    while len(selected) < stop_at:
        subsets = [selected + [v] for v in candidates]
        scores = _score_candidates(target_kernel, kind, data, subsets, spec, n_jobs)
        var, value = _rank_candidates(candidates, scores, maximize=False)[0]

        selected.append(var)
        values.append(value)
        candidates = [v for v in candidates if v != var]

        logger.info(f"{kind.value} forward step {len(selected)} | added={data.column_names[var]} | value={value:.6g}")

    return EliminationResult(tuple(selected), tuple(values), Direction.FORWARD, target)


def bahsic_eliminate(
    data: DataMatrix,
    target: int,
    spec: KernelSpec | None = None,
    beta: float = 0.0,
    target_spec: KernelSpec | None = None,
    n_jobs: int = 1,
) -> EliminationResult:
    """
    BAHSIC baseline: drop the variable whose removal keeps HSIC(X_S, Y)
    largest. Same ascending-order contract as backward_eliminate.
    """

    _check_beta(beta)
    data.check_target(target)

    return _eliminate(data, target, MeasureKind.HSIC, spec or KernelSpec(), target_spec, beta, True, n_jobs)
