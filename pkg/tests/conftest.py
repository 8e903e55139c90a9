import numpy as np
import pytest

from blanket_system.kernels.kernel_core import GramMatrix
from blanket_system.schema import DataMatrix
from blanket_system.synthetic.synthetic_bench import SynthConfig, gen_mb_dataset


def make_data(columns: dict[str, list[float]] | np.ndarray, names=None) -> DataMatrix:
    if isinstance(columns, dict):
        names = tuple(columns)
        values = np.column_stack([np.asarray(v, dtype=float) for v in columns.values()])
    else:
        values = np.asarray(columns, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        names = names or tuple(f"X{j}" for j in range(values.shape[1]))
    return DataMatrix(values, tuple(names))


@pytest.fixture
def half_gram() -> GramMatrix:
    # centered linear Gram of the two points (0), (1)
    return GramMatrix(np.array([[0.25, -0.25], [-0.25, 0.25]]), centered=True)


@pytest.fixture
def two_sample_data() -> DataMatrix:
    return make_data({"X": [0.0, 1.0], "Y": [0.0, 1.0]})


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def small_blanket_data():
    return gen_mb_dataset(SynthConfig(n_samples=60, n_extraneous=4, seed=7))
