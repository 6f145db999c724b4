import numpy as np
import pytest

from src.analyzer.form_search import (
    form_gradient,
    min_form_value,
    p_objective,
    search_sign_counterexample,
    unit_vector_candidates,
)
from src.analyzer.models.options import SearchBudget
from src.core.tensor import Tensor, form_value, identity, new_dense


def central_difference(A, x, h=1e-6):
    gradient = np.zeros_like(x)
    for i in range(x.shape[0]):
        step = np.zeros_like(x)
        step[i] = h
        gradient[i] = (form_value(A, x + step) - form_value(A, x - step)) / (2 * h)
    return gradient


class TestGradient:
    def test_matches_central_differences(self, rng):
        for _ in range(100):
            m = int(rng.integers(2, 5))
            n = int(rng.integers(2, 5))
            A = Tensor(rng.standard_normal((n,) * m))
            x = rng.standard_normal(n)
            analytic = form_gradient(A, x)
            numeric = central_difference(A, x)
            assert np.linalg.norm(analytic - numeric) <= 1e-6 * max(1.0, np.linalg.norm(analytic))

    def test_identity(self):
        x = np.array([1.0, -2.0])
        assert np.allclose(form_gradient(identity(4, 2), x), 4 * x ** 3)


class TestMinFormValue:
    def test_identity_quartic(self, budget):
        value, x = min_form_value(identity(4, 2), budget)
        assert value == pytest.approx(0.5, abs=1e-8)
        assert np.allclose(np.abs(x), 1 / np.sqrt(2), atol=1e-4)

    def test_identity_matrix(self, budget):
        value, x = min_form_value(identity(2, 3), budget)
        assert value == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(x) == pytest.approx(1.0)

    def test_indefinite_matrix(self, budget):
        value, x = min_form_value(new_dense(2, 2, [1, 0, 0, -2]), budget)
        assert value == pytest.approx(-2.0, abs=1e-8)
        assert abs(x[1]) == pytest.approx(1.0, abs=1e-4)

    def test_deterministic_under_seed(self, rng):
        A = Tensor(rng.standard_normal((3, 3, 3, 3)))
        budget = SearchBudget(starts=8, max_iters=100, seed=7)
        first = min_form_value(A, budget)
        second = min_form_value(A, budget)
        assert first[0] == second[0]
        assert np.array_equal(first[1], second[1])

    def test_result_is_on_sphere(self, rng, budget):
        A = Tensor(rng.standard_normal((3, 3, 3, 3)))
        value, x = min_form_value(A, budget)
        assert np.linalg.norm(x) == pytest.approx(1.0)
        assert form_value(A, x) == pytest.approx(value)


class TestSignObjective:
    def test_p_objective(self):
        A = new_dense(2, 2, [0, 1, -1, 0])
        assert p_objective(A, [1.0, 1.0]) == pytest.approx(1.0)
        assert p_objective(A, [1.0, 0.0]) == 0.0

    def test_nonzero_only_ignores_zero_components(self):
        A = new_dense(2, 2, [-1, 0, 0, 1])
        x = [1.0, 0.0]
        assert p_objective(A, x) == 0.0
        assert p_objective(A, x, nonzero_only=True) == -1.0
        assert p_objective(A, [0.0, 0.0], nonzero_only=True) == np.inf

    def test_unit_vector_candidates(self):
        candidates = unit_vector_candidates(new_dense(3, 2, [2, 0, 0, 0, 0, 0, 0, -3]))
        values = sorted(value for value, _ in candidates)
        assert values == [-3.0, -2.0, 2.0, 3.0]

    def test_search_finds_negative_pattern(self, budget):
        A = new_dense(2, 2, [1, -3, -3, 1])
        value, x = search_sign_counterexample(A, budget)
        assert value < 0
        assert p_objective(A, x) == pytest.approx(value)

    def test_search_on_positive_tensor_stays_positive(self, budget):
        value, _ = search_sign_counterexample(identity(4, 3), budget)
        assert value > 0
