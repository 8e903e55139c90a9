import numpy as np
import pytest
from pydantic import ValidationError

from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.schema import Role
from blanket_system.selection.iamb import partial_correlation
from blanket_system.synthetic.synthetic_bench import (
    BLANKET_COLUMNS,
    TARGET_INDEX,
    SynthConfig,
    apply_grid_value,
    candidate_edges,
    derive_seed,
    gen_mb_dataset,
    sweep,
    sweep_configs,
)


def _col(data, name):
    return data.values[:, data.index_of(name)]


def test_base_topology_shape():
    data, truth = gen_mb_dataset(SynthConfig(n_samples=500, noise_sd=1.0, n_extraneous=10, seed=1))

    assert data.values.shape == (500, 17)
    assert data.column_names[:7] == ("P1", "P2", "S1", "S2", "C1", "C2", "Y")
    assert data.column_names[-1] == "E10"
    assert truth.target == TARGET_INDEX
    assert {data.column_names[v] for v in truth.mb} == set(BLANKET_COLUMNS)
    assert truth.roles[data.index_of("S2")] == Role.SPOUSE
    assert truth.roles[data.index_of("E3")] == Role.EXTRANEOUS


def test_zero_noise_structural_identities():
    data, _ = gen_mb_dataset(SynthConfig(n_samples=50, noise_sd=0.0, seed=4))

    y = _col(data, "Y")
    assert np.array_equal(y, _col(data, "P1") + _col(data, "P2"))
    assert np.array_equal(_col(data, "C1"), _col(data, "S1") + y)
    assert np.array_equal(_col(data, "C2"), _col(data, "S2") + y)


def test_zero_noise_weighted_and_both_spouses():
    data, truth = gen_mb_dataset(SynthConfig(n_samples=30, noise_sd=0.0, mb_weight=2.0, spouses_per_child="both"))

    y = _col(data, "Y")
    spouses = _col(data, "S1") + _col(data, "S2")
    assert np.array_equal(y, 2.0 * (_col(data, "P1") + _col(data, "P2")))
    assert np.array_equal(_col(data, "C1"), 2.0 * (spouses + y))
    assert len(truth.mb) == 6


def test_same_seed_is_bit_identical():
    cfg = SynthConfig(n_samples=80, extra_edges=15, seed=99)
    first, _ = gen_mb_dataset(cfg)
    second, _ = gen_mb_dataset(cfg)

    assert np.array_equal(first.values, second.values)
    assert not np.array_equal(first.values, gen_mb_dataset(cfg.model_copy(update={"seed": 100}))[0].values)


def test_spouse_is_a_collider_partner():
    hits = 0
    for seed in range(20):
        data, _ = gen_mb_dataset(SynthConfig(n_samples=5000, seed=seed))
        corr = np.corrcoef(data.values, rowvar=False)
        s1, y, c1 = data.index_of("S1"), data.index_of("Y"), data.index_of("C1")

        marginal = abs(corr[s1, y])
        conditional = abs(partial_correlation(corr, s1, y, [c1]))
        hits += marginal < 0.1 and conditional > 0.2

    assert hits >= 18


ROOT_COLUMNS = ["P1", "P2", "S1", "S2", *(f"E{j + 1}" for j in range(10))]


@pytest.mark.parametrize("n_samples", [500, 2000])
def test_root_columns_are_standard_normal(n_samples):
    bound = 4.0 / np.sqrt(n_samples)

    for seed in range(20):
        data, _ = gen_mb_dataset(SynthConfig(n_samples=n_samples, seed=seed))

        for name in ROOT_COLUMNS:
            col = _col(data, name)
            assert abs(np.mean(col)) < bound, (seed, name)
            assert 0.8 <= np.std(col) <= 1.2, (seed, name)


def test_moments_match_the_network():
    data, _ = gen_mb_dataset(SynthConfig(n_samples=20000, seed=5))

    assert np.var(_col(data, "Y")) == pytest.approx(3.0, rel=0.05)
    # Var(C1) = Var(S1) + Var(Y) + 1
    assert np.var(_col(data, "C1")) == pytest.approx(5.0, rel=0.05)


def test_extraneous_columns_are_independent_of_target():
    n = 500
    clean = 0

    for seed in range(20):
        data, _ = gen_mb_dataset(SynthConfig(n_samples=n, seed=100 + seed))
        corr = np.corrcoef(data.values, rowvar=False)
        clean += all(
            abs(corr[TARGET_INDEX, data.index_of(f"E{j + 1}")]) < 4.0 / np.sqrt(n)
            for j in range(10)
        )

    assert clean >= 18


def test_extra_edges_keep_blanket():
    cfg = SynthConfig(n_samples=70, extra_edges=100, seed=3)
    data, truth = gen_mb_dataset(cfg)

    assert len(candidate_edges(10)) == 100
    assert {data.column_names[v] for v in truth.mb} == set(BLANKET_COLUMNS)
    assert all(not (u.startswith("E") and v.startswith("C")) for u, v in candidate_edges(10))


def test_too_many_edges():
    with pytest.raises(BlanketError) as e:
        gen_mb_dataset(SynthConfig(extra_edges=101))
    assert e.value.code == ErrorCode.BAD_CONFIG


@pytest.mark.parametrize(
    "kwargs",
    [{"n_samples": 1}, {"noise_sd": -1.0}, {"mb_weight": float("inf")}, {"seed": -1}, {"spouses_per_child": "three"}],
)
def test_invalid_config(kwargs):
    with pytest.raises(ValidationError):
        SynthConfig(**kwargs)


def test_derived_seeds_are_distinct():
    seeds = {derive_seed(0, g, t) for g in range(10) for t in range(30)}
    assert len(seeds) == 300
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)


def test_samples_sweep_cardinality():
    grid = [50, 100, 150, 200, 250, 300, 350, 400, 450, 500]
    tasks = list(sweep_configs("samples", grid, SynthConfig(), 30))

    assert len(tasks) == 300
    assert len({t.config.seed for t in tasks}) == 300
    assert {t.config.n_samples for t in tasks} == set(grid)


def test_noise_sweep_holds_sample_size():
    points = sweep("noise", [0.5, 2.0], SynthConfig(n_extraneous=2), trials=2)

    assert [p.value for p in points] == [0.5, 2.0]
    for point in points:
        assert len(point.seeds) == 2
        for data, _ in point.datasets:
            assert data.n_samples == 70


def test_fixed_sample_size_can_be_disabled():
    cfg = apply_grid_value("weights", 0.5, SynthConfig(n_samples=120), fixed_sample_size=None)

    assert cfg.n_samples == 120
    assert cfg.mb_weight == 0.5


def test_unknown_experiment():
    with pytest.raises(BlanketError) as e:
        list(sweep_configs("depth", [1], SynthConfig(), 1))
    assert e.value.code == ErrorCode.BAD_EXPERIMENT


@pytest.mark.parametrize("grid, trials", [([], 3), ([50], 0)])
def test_empty_sweep_rejected(grid, trials):
    with pytest.raises(BlanketError) as e:
        list(sweep_configs("samples", grid, SynthConfig(), trials))
    assert e.value.code == ErrorCode.BAD_CONFIG


def test_swept_value_is_validated():
    with pytest.raises(ValidationError):
        apply_grid_value("samples", 1, SynthConfig())
