import numpy as np
import pytest

from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.kernels.dependence_measures import MeasureKind, evaluate
from blanket_system.kernels.kernel_core import KernelSpec
from blanket_system.selection.elimination import (
    Direction,
    backward_eliminate,
    bahsic_eliminate,
    forward_select,
    held_out_scores,
    removal_count,
)

from conftest import make_data


LINEAR = KernelSpec(family="linear", epsilon=1e-3)


def _signal_plus_noise(seed: int, n: int = 300):
    rng = np.random.default_rng(seed)
    x1 = rng.standard_normal(n)
    x2 = rng.standard_normal(n)
    y = x1 + 0.3 * rng.standard_normal(n)
    return make_data({"X1": x1, "X2": x2, "Y": y})


def _oracle_order(data, target, kind, spec):
    remaining = data.non_target(target)
    order, values = [], []

    while remaining:
        scored = []
        for u in remaining:
            rest = [v for v in remaining if v != u]
            scored.append((evaluate(kind, data, target, rest, spec), u))
        value, var = min(scored)
        order.append(var)
        values.append(value)
        remaining.remove(var)

    return tuple(order), tuple(values)


def test_single_variable():
    data = make_data({"X": [0.0, 1.0, 3.0], "Y": [1.0, 0.0, 2.0]})
    result = backward_eliminate(data, 1, MeasureKind.M1, LINEAR)

    assert result.order == (0,)
    assert result.direction == Direction.BACKWARD
    assert result.step_values[0] == pytest.approx(evaluate(MeasureKind.M1, data, 1, [], LINEAR))


@pytest.mark.parametrize("kind", [MeasureKind.M1, MeasureKind.M2])
def test_order_is_permutation_of_non_targets(small_blanket_data, kind):
    data, truth = small_blanket_data
    result = backward_eliminate(data, truth.target, kind, LINEAR)

    assert sorted(result.order) == data.non_target(truth.target)
    assert len(result.step_values) == len(result.order)


@pytest.mark.parametrize("kind", [MeasureKind.M1, MeasureKind.M2])
def test_each_step_is_the_scan_minimum(small_blanket_data, kind):
    data, truth = small_blanket_data
    result = backward_eliminate(data, truth.target, kind, LINEAR)
    order, values = _oracle_order(data, truth.target, kind, LINEAR)

    assert result.order == order
    assert result.step_values == pytest.approx(values, rel=1e-12)


def test_tie_goes_to_lowest_index():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(40)
    y = x + 0.1 * rng.standard_normal(40)
    # identical columns give identical held-out scores
    data = make_data({"A": x, "B": x, "Y": y})

    scores = held_out_scores(data, 2, [0, 1], MeasureKind.M1, LINEAR)
    assert scores[0] == scores[1]

    result = backward_eliminate(data, 2, MeasureKind.M1, LINEAR)
    assert result.order == (0, 1)


def test_deterministic(small_blanket_data):
    data, truth = small_blanket_data
    first = backward_eliminate(data, truth.target, MeasureKind.M1, KernelSpec(family="gaussian"))
    second = backward_eliminate(data, truth.target, MeasureKind.M1, KernelSpec(family="gaussian"))

    assert first == second


@pytest.mark.parametrize(
    "remaining, beta, expected",
    [(10, 0.0, 1), (10, 0.5, 5), (3, 0.5, 2), (1, 0.9, 1), (7, 0.9, 1), (4, 0.25, 3)],
)
def test_removal_count(remaining, beta, expected):
    assert removal_count(remaining, beta) == expected


def test_batched_elimination_is_still_a_permutation(small_blanket_data):
    data, truth = small_blanket_data
    result = backward_eliminate(data, truth.target, MeasureKind.M1, LINEAR, beta=0.5)

    assert sorted(result.order) == data.non_target(truth.target)


def test_batched_elimination_removes_worst_first():
    data = _signal_plus_noise(0)
    result = backward_eliminate(data, 2, MeasureKind.M1, LINEAR, beta=0.3)

    assert result.order == (1, 0)


def test_relevant_variable_survives_longest():
    hits = 0
    for seed in range(20):
        result = backward_eliminate(_signal_plus_noise(seed), 2, MeasureKind.M1, LINEAR)
        hits += result.order[-1] == 0

    assert hits >= 18


def test_forward_picks_relevant_variable_first():
    hits = 0
    for seed in range(20):
        result = forward_select(_signal_plus_noise(seed), 2, MeasureKind.M1, LINEAR)

        assert result.direction == Direction.FORWARD
        assert result.ascending() == tuple(reversed(result.order))
        hits += result.order[0] == 0

    assert hits >= 18


def test_forward_stop_at(small_blanket_data):
    data, truth = small_blanket_data
    result = forward_select(data, truth.target, MeasureKind.M2, LINEAR, stop_at=3)

    assert len(result.order) == 3
    assert len(set(result.order)) == 3


@pytest.mark.parametrize("stop_at", [0, 11, -1])
def test_forward_bad_stop(small_blanket_data, stop_at):
    data, truth = small_blanket_data
    with pytest.raises(BlanketError) as e:
        forward_select(data, truth.target, stop_at=stop_at)
    assert e.value.code == ErrorCode.BAD_STOP


def test_bad_target(small_blanket_data):
    data, _ = small_blanket_data
    with pytest.raises(BlanketError) as e:
        backward_eliminate(data, 99)
    assert e.value.code == ErrorCode.BAD_TARGET


def test_hsic_is_not_a_conditional_measure(small_blanket_data):
    data, truth = small_blanket_data
    with pytest.raises(BlanketError) as e:
        backward_eliminate(data, truth.target, MeasureKind.HSIC)
    assert e.value.code == ErrorCode.BAD_MEASURE


@pytest.mark.parametrize("beta", [1.0, -0.1, 1.5])
def test_bad_beta(small_blanket_data, beta):
    data, truth = small_blanket_data
    with pytest.raises(BlanketError) as e:
        backward_eliminate(data, truth.target, beta=beta)
    assert e.value.code == ErrorCode.BAD_BETA

    with pytest.raises(BlanketError):
        bahsic_eliminate(data, truth.target, beta=beta)


def test_bahsic_keeps_copy_of_target_last():
    hits = 0
    for seed in range(20):
        rng = np.random.default_rng(11 + seed)
        y = rng.standard_normal(100)
        data = make_data({
            "N1": rng.standard_normal(100),
            "COPY": y.copy(),
            "N2": rng.standard_normal(100),
            "Y": y,
        })

        result = bahsic_eliminate(data, 3, LINEAR)

        assert sorted(result.order) == [0, 1, 2]
        hits += result.order[-1] == 1

    assert hits >= 18


def test_parallel_scoring_matches_serial(small_blanket_data):
    data, truth = small_blanket_data
    serial = backward_eliminate(data, truth.target, MeasureKind.M1, LINEAR)
    parallel = backward_eliminate(data, truth.target, MeasureKind.M1, LINEAR, n_jobs=2)

    assert parallel.order == serial.order
    assert parallel.step_values == pytest.approx(serial.step_values, rel=1e-9)
