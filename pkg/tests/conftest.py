import numpy as np
import pytest

from src.analyzer.models.options import HullSettings, MTolerances, SearchBudget, SpectralOptions
from src.core.tensor import Tensor, diagonal_mask, identity, new_dense, ones
from src.interval.hull import hull_new


def z_pattern(order: int, dim: int, diag: float, off: float) -> Tensor:
    """Constant diagonal `diag`, every off-diagonal entry `off`."""
    mask = diagonal_mask(order, dim)
    return Tensor(np.where(mask, diag, off))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def spectral_options():
    return SpectralOptions()


@pytest.fixture
def tolerances():
    return MTolerances()


@pytest.fixture
def budget():
    return SearchBudget(starts=16, max_iters=300, seed=0)


@pytest.fixture
def hull_settings(budget):
    return HullSettings(threads=2, budget=budget)


@pytest.fixture
def make_z():
    return z_pattern


@pytest.fixture
def random_nonnegative(rng):
    def factory(order: int, dim: int, positive: bool = False) -> Tensor:
        data = rng.random((dim,) * order)
        return Tensor(data + 0.1 if positive else data)
    return factory


@pytest.fixture
def ones_3_2():
    return ones(3, 2)


@pytest.fixture
def strong_m_3_2():
    # 5I - ones(3, 2): diagonal 4, off-diagonal -1, rho(D) = 3
    return z_pattern(3, 2, 4.0, -1.0)


@pytest.fixture
def boundary_m_3_2():
    # 4I - ones(3, 2): M but not strong
    return z_pattern(3, 2, 3.0, -1.0)


@pytest.fixture
def worked_matrix_hull():
    lower = new_dense(2, 2, [1.0, -1.0, -1.0, 1.0])
    upper = new_dense(2, 2, [2.0, 1.0, 1.0, 2.0])
    return hull_new(lower, upper)


@pytest.fixture
def identity_3_2():
    return identity(3, 2)


@pytest.fixture
def write_json(tmp_path):
    def writer(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return writer
