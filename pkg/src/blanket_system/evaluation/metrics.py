"""
Evaluation Metrics

Scores rankings and subsets against a known Markov blanket:

- normalize_ranks: tied ranks for contiguous runs of blanket variables,
  counted from the most important end; mean blanket rank (best = 1).
- clip_ranking: the k most important variables of a ranking.
- accuracy: Jaccard index x 100 between a subset and the blanket.
- aggregate: mean and normal-approximation 95% half-width over trials.
"""

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.schema import MarkovBlanketTruth
from blanket_system.selection.elimination import Direction, EliminationResult, SubsetResult


Z_95 = 1.96


@dataclass(frozen=True)
class NormalizedRanking:
    ranks: Mapping[int, int]
    mean_mb_rank: float

    def positional(self, order: Sequence[int]) -> list[int]:
        return [self.ranks[v] for v in order]


@dataclass(frozen=True)
class TrialSummary:
    grid_value: float
    scores: tuple[float, ...]
    mean: float
    ci95_half_width: float


def _require_truth(truth: MarkovBlanketTruth) -> None:
    if not truth.mb:
        raise BlanketError(ErrorCode.EMPTY_TRUTH, f"blanket of target {truth.target} is empty")


def normalize_ranks(elim_order_ascending: Sequence[int], truth: MarkovBlanketTruth) -> NormalizedRanking:
    """
    Walk from the last eliminated variable backwards: it gets rank 1; a
    variable keeps its predecessor's rank only when both are blanket
    members, otherwise the rank increments.
    """

    _require_truth(truth)
    order = [int(v) for v in elim_order_ascending]

    if len(set(order)) != len(order) or truth.target in order or not truth.mb <= set(order):
        raise BlanketError(ErrorCode.BAD_ORDER, f"order {order} is not a permutation of the non-target variables")

    ranks: dict[int, int] = {}
    rank = 0
    previous_in_mb = False

    for var in reversed(order):
        in_mb = var in truth.mb
        if not (in_mb and previous_in_mb):
            rank += 1
        ranks[var] = rank
        previous_in_mb = in_mb

    mean_mb_rank = float(np.mean([ranks[v] for v in truth.mb]))

    return NormalizedRanking(ranks, mean_mb_rank)


def clip_ranking(result: EliminationResult, k: int) -> SubsetResult:
    """
    The k most important variables: the last k eliminated (backward) or
    the first k selected (forward).
    """

    if not 0 <= k <= len(result.order):
        raise BlanketError(ErrorCode.BAD_K, f"k must be in [0, {len(result.order)}], got {k}")

    if result.direction == Direction.BACKWARD:
        members = result.order[len(result.order) - k:]
    else:
        members = result.order[:k]

    return SubsetResult(frozenset(members), result.target)


def accuracy(subset: SubsetResult, truth: MarkovBlanketTruth) -> float:
    """
    |X_c ∩ MB| / |X_c ∪ MB| * 100.
    """

    union = subset.members | truth.mb
    if not union:
        raise BlanketError(ErrorCode.UNDEFINED_SCORE, "subset and blanket are both empty")

    return 100.0 * len(subset.members & truth.mb) / len(union)


def aggregate(scores: Sequence[float], grid_value: float = float("nan")) -> TrialSummary:
    values = np.asarray(scores, dtype=float)

    if values.size < 2:
        raise BlanketError(ErrorCode.TOO_FEW_TRIALS, f"need at least 2 scores, got {values.size}")

    half_width = Z_95 * values.std(ddof=1) / np.sqrt(values.size)

    return TrialSummary(
        grid_value=grid_value,
        scores=tuple(values.tolist()),
        mean=float(values.mean()),
        ci95_half_width=float(half_width),
    )


def score_ranking(result: EliminationResult, truth: MarkovBlanketTruth) -> dict[str, float]:
    """Both tracks for a ranking: mean blanket rank and clipped accuracy."""

    normalized = normalize_ranks(result.ascending(), truth)
    clipped = clip_ranking(result, min(len(truth.mb), len(result.order)))

    return {
        "mean_mb_rank": normalized.mean_mb_rank,
        "accuracy": accuracy(clipped, truth),
    }


def score_subset(subset: SubsetResult, truth: MarkovBlanketTruth) -> dict[str, float]:
    _require_truth(truth)
    return {"accuracy": accuracy(subset, truth)}
