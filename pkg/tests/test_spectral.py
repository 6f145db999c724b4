import numpy as np
import pytest

from src.analyzer.models.options import SpectralOptions
from src.analyzer.spectral import (
    cw_bounds,
    cw_lower,
    is_eigenpair,
    perron_vector,
    residual,
    spectral_radius,
    upper_witness,
)
from src.analyzer.structure import is_weakly_irreducible
from src.core.exceptions import NegativeEntryException, SpectralException
from src.core.tensor import Tensor, diagonal, identity, new_dense, ones, principal_subtensor, scale_shift
from src.oracle import cw_refine, matrix_rho


class TestCollatzWielandt:
    def test_all_ones(self, ones_3_2):
        assert cw_bounds(ones_3_2, [1, 1]) == (4.0, 4.0)

    def test_diagonal(self):
        assert cw_bounds(diagonal(4, [3, 5]), [1, 1]) == (3.0, 5.0)

    def test_matrix(self):
        assert cw_bounds(new_dense(2, 2, [2, 1, 1, 2]), [1, 2]) == (2.5, 4.0)

    def test_upper_needs_positive_vector(self, ones_3_2):
        with pytest.raises(SpectralException):
            cw_bounds(ones_3_2, [1, 0])
        assert cw_lower(ones_3_2, [1, 0]) == 1.0

    def test_lower_bound_is_valid(self, random_nonnegative, rng):
        for _ in range(20):
            A = random_nonnegative(3, 3)
            x = rng.random(3) + 0.01
            lo, hi = cw_bounds(A, x)
            rho = spectral_radius(A).rho
            assert lo <= rho + 1e-9 and rho <= hi + 1e-9


class TestSpectralRadius:
    @pytest.mark.parametrize("m", [2, 3, 4])
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_all_ones(self, m, n):
        result = spectral_radius(ones(m, n))
        assert result.converged
        assert result.rho == pytest.approx(n ** (m - 1), abs=1e-10 * n ** (m - 1))

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_diagonal(self, m):
        assert spectral_radius(diagonal(m, [3, 5])).rho == 5.0

    def test_matrix(self):
        assert spectral_radius(new_dense(2, 2, [2, 1, 1, 2])).rho == pytest.approx(3.0, abs=1e-10)

    def test_matches_oracle_bracket(self):
        data = np.zeros((2, 2, 2))
        data[0, 0, 0], data[0, 1, 1], data[1, 0, 0], data[1, 1, 1] = 2, 1, 1, 2
        A = Tensor(data)
        rho = spectral_radius(A).rho
        bracket = cw_refine(A)
        assert bracket.contains(rho, slack=1e-8)

    def test_zero_and_scalar(self):
        assert spectral_radius(Tensor(np.zeros((2, 2, 2)))).rho == 0.0
        assert spectral_radius(new_dense(3, 1, [7.0])).rho == 7.0

    def test_rejects_negative(self):
        with pytest.raises(NegativeEntryException):
            spectral_radius(new_dense(2, 2, [1, -1, 0, 1]))

    def test_order_one_rejected(self):
        with pytest.raises(SpectralException):
            spectral_radius(Tensor(np.ones(3)))

    def test_matrix_case_agrees_with_eigvals(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 7))
            M = rng.random((n, n))
            assert spectral_radius(Tensor(M)).rho == pytest.approx(matrix_rho(M), abs=1e-8)

    def test_spectral_mapping(self, random_nonnegative, spectral_options):
        for _ in range(20):
            A = random_nonnegative(3, 3)
            rho = spectral_radius(A).rho
            for a in (0.5, 2.0):
                for b in (0.0, 1.0, 3.0):
                    shifted = spectral_radius(scale_shift(A, a, b)).rho
                    assert shifted == pytest.approx(a * (rho + b), abs=10 * spectral_options.tol * max(1.0, shifted))

    def test_monotonicity(self, random_nonnegative, rng):
        for _ in range(30):
            A = random_nonnegative(3, 3)
            B = Tensor(A.data + rng.random(A.shape) * 0.3)
            assert spectral_radius(A).rho <= spectral_radius(B).rho + 1e-9

    def test_strict_monotonicity_weakly_irreducible(self, random_nonnegative, spectral_options):
        for _ in range(20):
            B = random_nonnegative(3, 3, positive=True)
            data = np.array(B.data)
            data[0, 1, 2] -= 0.1
            A = Tensor(data)
            assert spectral_radius(B).rho - spectral_radius(A).rho > 10 * spectral_options.tol

    def test_principal_subtensor_strictly_smaller(self, random_nonnegative):
        A = random_nonnegative(3, 3, positive=True)
        rho = spectral_radius(A)
        for alpha in ([0], [1, 2], [0, 2]):
            sub = spectral_radius(principal_subtensor(A, alpha))
            assert sub.upper < rho.lower

    def test_bracket_contains_rho(self, random_nonnegative):
        result = spectral_radius(random_nonnegative(4, 3))
        assert result.lower <= result.rho <= result.upper

    def test_reducible_lower_witness_reproduces_bound(self):
        data = np.zeros((2, 2, 2))
        data[0, 1, 1] = 5.0
        data[0, 0, 0] = 1.0
        data[1, 1, 1] = 2.0
        A = Tensor(data)
        assert not is_weakly_irreducible(A)
        result = spectral_radius(A)
        assert result.rho == pytest.approx(2.0)
        assert cw_lower(A, result.lower_witness) == pytest.approx(result.lower)

    def test_non_convergence_is_reported(self, random_nonnegative):
        result = spectral_radius(random_nonnegative(3, 3, positive=True), SpectralOptions(tol=1e-15, max_iters=2))
        assert not result.converged
        assert result.lower <= result.upper


class TestPerronVector:
    def test_all_ones(self, ones_3_2):
        assert np.allclose(perron_vector(ones_3_2), [1.0, 1.0])

    def test_identity(self):
        assert np.allclose(perron_vector(identity(3, 3)), np.ones(3))

    def test_matrix(self):
        assert np.allclose(perron_vector(new_dense(2, 2, [2, 1, 1, 2])), [1.0, 1.0])

    def test_eigenpair(self, random_nonnegative):
        for _ in range(10):
            A = random_nonnegative(3, 3, positive=True)
            result = spectral_radius(A)
            y = perron_vector(A)
            assert np.all(y > 0)
            assert is_eigenpair(A, result.rho, y, tol=1e-8)
            assert np.max(np.abs(residual(A, result.rho, y))) <= 1e-8 * max(1.0, result.rho)

    def test_reducible_without_positive_eigenvector(self):
        data = np.zeros((2, 2, 2))
        data[0, 1, 1] = 5.0
        with pytest.raises(SpectralException):
            perron_vector(Tensor(data))


class TestResidual:
    def test_identity(self):
        assert residual(identity(3, 2), 1.0, [1, 2]).tolist() == [0.0, 0.0]

    def test_rho_zero_nonnegative(self, random_nonnegative, rng):
        A = random_nonnegative(3, 3)
        assert np.all(residual(A, 0.0, rng.random(3)) >= 0)


def oracle_rho(A):
    """Independent rho with the width of its uncertainty."""
    if A.order == 2:
        return matrix_rho(A.data), 0.0
    bracket = cw_refine(A)
    return 0.5 * (bracket.lo + bracket.hi), bracket.width


def random_weakly_irreducible(rng):
    while True:
        order, dim = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        data = rng.random((dim,) * order) * (rng.random((dim,) * order) < 0.6)
        A = Tensor(data)
        if is_weakly_irreducible(A):
            return A


class TestResidualBounds:
    def test_residual_bounds_distance_to_rho(self, rng):
        for _ in range(100):
            A = random_weakly_irreducible(rng)
            rho, width = oracle_rho(A)
            y = rng.uniform(0.1, 1.0, A.dim)
            lam = rho + rng.normal() * 0.5
            bound = np.max(np.abs(residual(A, lam, y)) / y ** (A.order - 1))
            assert abs(lam - rho) <= bound + width + 1e-12 * max(1.0, rho)

    def test_one_sided_residual_only_at_eigenvector(self, rng):
        for _ in range(100):
            order, dim = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            A = Tensor(rng.random((dim,) * order) + 0.05)
            rho, width = oracle_rho(A)
            y = perron_vector(A)
            assert np.max(np.abs(residual(A, rho, y))) <= 1e-8 * max(1.0, rho) + width

            # a positive vector off the Perron ray leaves residual entries of both signs
            perturbed = y * (1.0 + 0.05 * rng.uniform(-1.0, 1.0, dim))
            r = residual(A, rho, perturbed)
            slack = 10 * width + 1e-10 * max(1.0, rho)
            assert r.min() < -slack
            assert r.max() > slack


class TestUpperWitness:
    def test_diagonal(self):
        A = diagonal(3, [1.0, 0.0])
        x = upper_witness(A, 3.0)
        assert np.all(x > 0)
        assert cw_bounds(A, x)[1] < 3.0

    def test_zero_tensor(self):
        x = upper_witness(Tensor(np.zeros((2, 2, 2))), 0.5)
        assert np.all(x > 0)

    def test_bound_at_or_below_rho(self, ones_3_2):
        assert upper_witness(ones_3_2, 4.0) is None
        assert upper_witness(ones_3_2, 0.0) is None
