import numpy as np
import pytest

from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.kernels.dependence_measures import MeasureKind, evaluate, hsic, m1, m2
from blanket_system.kernels.kernel_core import GramMatrix, KernelSpec, center, compute_gram
from blanket_system.schema import DataMatrix

from conftest import make_data


EPS = 1e-3
ZERO = GramMatrix(np.zeros((2, 2)), centered=True)


def explicit_m1(g_y, g_xs, eps):
    n = g_y.shape[0]
    return float(np.trace(g_y @ np.linalg.inv(g_xs + n * eps * np.eye(n))))


def explicit_m2(g_y, g_xs, eps):
    n = g_y.shape[0]
    t = eps * np.linalg.inv(g_xs + eps * np.eye(n))
    return float(np.trace(t @ g_y @ t))


def test_m1_constant_target_is_zero(half_gram):
    assert m1(ZERO, half_gram, EPS) == 0.0


def test_m1_empty_conditioning(half_gram):
    assert m1(half_gram, None, EPS) == pytest.approx(0.5 / (2 * EPS), rel=1e-12)
    assert m1(half_gram, None, EPS) == pytest.approx(250.0, rel=1e-12)


def test_m1_fully_explained_target(half_gram):
    value = m1(half_gram, half_gram, EPS)

    assert value == pytest.approx(0.001 / 0.001004, rel=1e-9)
    assert value == pytest.approx(explicit_m1(half_gram.entries, half_gram.entries, EPS), rel=1e-3)
    assert value == pytest.approx(0.996, abs=1e-3)


def test_m2_examples(half_gram):
    assert m2(half_gram, None, EPS) == pytest.approx(0.5, rel=1e-12)
    assert m2(ZERO, half_gram, EPS) == 0.0

    value = m2(half_gram, half_gram, EPS)
    # T acts as eps / (0.5 + eps) on the only non-null direction of G_Y
    assert value == pytest.approx(0.5 * (EPS / (0.5 + EPS)) ** 2, rel=1e-9)
    assert value == pytest.approx(2e-6, rel=1e-2)
    assert value == pytest.approx(explicit_m2(half_gram.entries, half_gram.entries, EPS), rel=1e-3)


def test_hsic_examples(half_gram):
    assert hsic(ZERO, half_gram) == 0.0
    assert hsic(half_gram, half_gram) == pytest.approx(0.25, rel=1e-12)


def test_hsic_invariant_to_joint_permutation(rng):
    data = DataMatrix(rng.normal(size=(10, 2)), ("x", "y"))
    spec = KernelSpec("gaussian")
    g_x = center(compute_gram(data, [0], spec))
    g_y = center(compute_gram(data, [1], spec))
    perm = rng.permutation(10)

    def permuted(g):
        return GramMatrix(g.entries[np.ix_(perm, perm)], centered=True)

    assert hsic(permuted(g_x), permuted(g_y)) == pytest.approx(hsic(g_x, g_y), rel=1e-12)


@pytest.mark.parametrize("measure", [m1, m2])
def test_uncentered_input_rejected(measure, half_gram):
    raw = GramMatrix(half_gram.entries, centered=False)
    with pytest.raises(BlanketError) as err:
        measure(raw, half_gram, EPS)
    assert err.value.code == ErrorCode.NOT_CENTERED


@pytest.mark.parametrize("measure", [m1, m2, lambda a, b, eps: hsic(a, b)])
def test_size_mismatch_rejected(measure, half_gram):
    bigger = GramMatrix(np.zeros((3, 3)), centered=True)
    with pytest.raises(BlanketError) as err:
        measure(half_gram, bigger, EPS)
    assert err.value.code == ErrorCode.DIMENSION_MISMATCH


def test_evaluate_empty_conditioning_m2(two_sample_data):
    assert evaluate(MeasureKind.M2, two_sample_data, 1, [], KernelSpec()) == pytest.approx(0.5, rel=1e-12)


def test_evaluate_m1_two_samples(two_sample_data):
    value = evaluate(MeasureKind.M1, two_sample_data, 1, [0], KernelSpec())
    assert value == pytest.approx(0.996, abs=1e-3)


def test_evaluate_hsic_constant_target():
    data = make_data({"X": [0.0, 1.0, 2.0], "Y": [4.0, 4.0, 4.0]})
    assert evaluate(MeasureKind.HSIC, data, 1, [0], KernelSpec()) == pytest.approx(0.0, abs=1e-12)


def test_evaluate_rejects_target_in_conditioning(two_sample_data):
    with pytest.raises(BlanketError) as err:
        evaluate(MeasureKind.M1, two_sample_data, 1, [0, 1], KernelSpec())
    assert err.value.code == ErrorCode.BAD_CONDITIONING


def test_separate_target_kernel(rng):
    data = DataMatrix(rng.normal(size=(30, 3)), ("a", "b", "y"))
    linear = evaluate(MeasureKind.M1, data, 2, [0, 1], KernelSpec("linear"))
    mixed = evaluate(MeasureKind.M1, data, 2, [0, 1], KernelSpec("linear"), target_spec=KernelSpec("gaussian"))

    assert linear != mixed


def _random_instance(rng):
    n = int(rng.integers(3, 20))
    d = int(rng.integers(2, 5))
    data = DataMatrix(rng.normal(size=(n, d)) * rng.uniform(0.1, 5.0), tuple(f"v{j}" for j in range(d)))
    spec = KernelSpec(
        family=rng.choice(["linear", "gaussian"]),
        epsilon=float(10 ** rng.uniform(-4, -1)),
    )
    size = int(rng.integers(0, d))
    conditioning = sorted(rng.choice(np.arange(1, d), size=size, replace=False).tolist())
    return data, spec, conditioning


def test_measures_nonnegative_on_random_instances(rng):
    for _ in range(200):
        data, spec, conditioning = _random_instance(rng)
        for kind in MeasureKind:
            assert evaluate(kind, data, 0, conditioning, spec) >= -1e-10


def test_evaluate_invariant_to_row_order(rng):
    for _ in range(20):
        data, spec, conditioning = _random_instance(rng)
        perm = rng.permutation(data.n_samples)
        for kind in MeasureKind:
            base = evaluate(kind, data, 0, conditioning, spec)
            permuted = evaluate(kind, data.permute_rows(perm), 0, conditioning, spec)
            assert permuted == pytest.approx(base, rel=1e-8, abs=1e-12)


def test_solve_matches_explicit_inverse(rng):
    for _ in range(25):
        n = int(rng.integers(5, 40))
        data = DataMatrix(rng.normal(size=(n, 3)), ("a", "b", "y"))
        spec = KernelSpec("gaussian")
        g_y = center(compute_gram(data, [2], spec))
        g_xs = center(compute_gram(data, [0, 1], spec))

        assert m1(g_y, g_xs, EPS) == pytest.approx(explicit_m1(g_y.entries, g_xs.entries, EPS), rel=1e-8)
        assert m2(g_y, g_xs, EPS) == pytest.approx(explicit_m2(g_y.entries, g_xs.entries, EPS), rel=1e-8)


def test_conditioning_on_blanket_lowers_measure(small_blanket_data):
    data, truth = small_blanket_data
    mb = sorted(truth.mb)
    spec = KernelSpec()

    for kind in (MeasureKind.M1, MeasureKind.M2):
        full = evaluate(kind, data, truth.target, mb, spec)
        empty = evaluate(kind, data, truth.target, [], spec)
        assert full < empty
