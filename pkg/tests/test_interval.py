import numpy as np
import pytest
from scipy import linalg

from src.analyzer.certificates import check_certificate, hull_certificates
from src.analyzer.classifier import classify_m, is_p, z_split
from src.analyzer.models.options import HullSettings
from src.analyzer.spectral import spectral_radius
from src.core.constants import MatrixClass, TensorClass, VerdictLabel
from src.core.exceptions import DimensionMismatchException, IntervalException, VertexCapException
from src.core.tensor import Tensor, compare, diagonal_mask, identity, matrix_product, new_dense, ones
from src.interval import (
    HullCertifier,
    contains,
    hull_is_p,
    hull_is_p0,
    hull_is_pd,
    hull_is_psd,
    hull_is_strong_m,
    hull_new,
    interior_is_strong_m,
    iter_vertices,
    key_inequality_gap,
    member_towards,
    sample,
    sign_vector,
    vertex_tensor,
)
from src.oracle import p_matrix_minors
from src.utils.generators import random_z


def z_upper(lower: Tensor, off: float, diag: float) -> Tensor:
    mask = diagonal_mask(lower.order, lower.dim)
    return Tensor(np.where(mask, diag, off))


def matrix_in_class(M: np.ndarray, cls: TensorClass) -> bool:
    if cls == TensorClass.PSD:
        return float(linalg.eigvalsh(0.5 * (M + M.T))[0]) >= -1e-9
    minors = p_matrix_minors(M)
    return minors == MatrixClass.P if cls == TensorClass.P else minors != MatrixClass.NEITHER


def strong_m_endpoints(seed: int, margin: float):
    """Z-tensor lower endpoint with s - rho(D) = margin and a Z upper endpoint above it."""
    rng = np.random.default_rng(seed)
    A = random_z(3, 3, seed=seed)
    split = z_split(A)
    rho = spectral_radius(split.D).rho
    lower = Tensor(A.data + (rho - split.s + margin) * identity(3, 3).data)
    mask = diagonal_mask(3, 3)
    raised = np.where(mask, lower.data, np.minimum(lower.data + rng.random(lower.shape) * 0.5, 0.0))
    return lower, Tensor(raised + 0.5 * identity(3, 3).data)


def random_hull(rng, order, dim, width=0.5):
    base = rng.standard_normal((dim,) * order)
    return hull_new(Tensor(base - rng.random(base.shape) * width), Tensor(base + rng.random(base.shape) * width))


class TestHullConstruction:
    def test_degenerate(self, ones_3_2):
        h = hull_new(ones_3_2, ones_3_2)
        assert h.is_degenerate
        assert not np.any(h.radius.data)
        assert compare(sample(h, seed=3), ones_3_2).eq

    def test_worked_example(self, worked_matrix_hull):
        assert worked_matrix_hull.center.entries.tolist() == [1.5, 0.0, 0.0, 1.5]
        assert worked_matrix_hull.radius.entries.tolist() == [0.5, 1.0, 1.0, 0.5]

    def test_order_violation(self):
        with pytest.raises(IntervalException, match=r"A ≰ B at \(0,0\)"):
            hull_new(new_dense(2, 1, [0.0]), new_dense(2, 1, [-1.0]))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchException):
            hull_new(ones(2, 2), ones(3, 2))


class TestMembership:
    def test_center_and_endpoints(self, worked_matrix_hull):
        h = worked_matrix_hull
        assert contains(h, h.center) and contains(h, h.center, interior=True)
        assert contains(h, h.lower) and not contains(h, h.lower, interior=True)

    def test_outside(self, worked_matrix_hull):
        data = np.array(worked_matrix_hull.upper.data)
        data[0, 1] += 0.01
        assert not contains(worked_matrix_hull, Tensor(data))

    def test_samples_are_members(self, rng):
        h = random_hull(rng, 3, 2)
        for seed in range(1000):
            assert contains(h, sample(h, seed=seed))
        for seed in range(200):
            assert contains(h, sample(h, seed=seed, interior=True), interior=True)

    def test_sample_is_deterministic(self, worked_matrix_hull):
        assert compare(sample(worked_matrix_hull, seed=11), sample(worked_matrix_hull, seed=11)).eq

    def test_member_towards(self, worked_matrix_hull):
        h = worked_matrix_hull
        assert compare(member_towards(h, 0.0), h.lower).eq
        assert compare(member_towards(h, 1.0), h.upper).eq
        with pytest.raises(IntervalException):
            member_towards(h, 1.5)


class TestVertices:
    def test_sign_vector(self):
        assert sign_vector([0, -2, 3]) == (1, -1, 1)
        assert sign_vector([-1, -0.5]) == (-1, -1)
        assert sign_vector([0, 0]) == (1, 1)

    def test_vertex_tensor_all_plus_is_lower(self, worked_matrix_hull):
        assert compare(vertex_tensor(worked_matrix_hull, (1, 1)), worked_matrix_hull.lower).eq

    def test_vertex_tensor_all_minus(self, rng):
        even = random_hull(rng, 2, 3)
        assert compare(vertex_tensor(even, (-1, -1, -1)), even.lower).eq
        odd = random_hull(rng, 3, 3)
        assert compare(vertex_tensor(odd, (-1, -1, -1)), odd.upper).eq

    def test_vertex_tensor_mixed(self, worked_matrix_hull):
        assert vertex_tensor(worked_matrix_hull, (1, -1)).entries.tolist() == [1.0, 1.0, 1.0, 1.0]

    def test_vertex_matches_center_minus_scaled_radius(self, rng):
        h = random_hull(rng, 3, 3)
        z = (1, -1, 1)
        D = np.diag(z).astype(float)
        expected = h.center.data - matrix_product(h.radius, D).data
        assert np.allclose(vertex_tensor(h, z).data, expected)

    def test_iter_vertices_gray_code(self, rng):
        h = random_hull(rng, 3, 3)
        seen = list(iter_vertices(h))
        assert len(seen) == 8
        assert len({z for z, _ in seen}) == 8
        for (z, tensor), (z_next, _) in zip(seen, seen[1:]):
            assert sum(a != b for a, b in zip(z, z_next)) == 1
        for z, tensor in seen:
            assert compare(tensor, vertex_tensor(h, z)).eq

    def test_iter_vertices_fixed_first(self, rng):
        h = random_hull(rng, 4, 3)
        seen = list(iter_vertices(h, fix_first=True))
        assert len(seen) == 4
        assert all(z[0] == 1 for z, _ in seen)

    def test_bad_sign_vector(self, worked_matrix_hull):
        with pytest.raises(IntervalException):
            vertex_tensor(worked_matrix_hull, (1, 0))


class TestKeyInequality:
    def test_zero_vector(self, worked_matrix_hull):
        gap = key_inequality_gap(worked_matrix_hull, worked_matrix_hull.center, [0.0, 0.0])
        assert gap.tolist() == [0.0, 0.0]

    def test_vertex_itself(self, rng):
        h = random_hull(rng, 3, 3)
        x = rng.standard_normal(3)
        gap = key_inequality_gap(h, vertex_tensor(h, sign_vector(x)), x)
        assert np.allclose(gap, 0.0, atol=1e-14)

    def test_random_members(self, rng):
        for _ in range(10_000):
            order = int(rng.integers(2, 5))
            dim = int(rng.integers(2, 4))
            h = random_hull(rng, order, dim)
            C = sample(h, seed=int(rng.integers(2 ** 31)))
            x = rng.standard_normal(dim)
            gap = key_inequality_gap(h, C, x / np.linalg.norm(x))
            assert np.all(gap >= -1e-12)

    def test_outside_member(self, worked_matrix_hull):
        with pytest.raises(IntervalException):
            key_inequality_gap(worked_matrix_hull, ones(2, 2) * 5, [1.0, 1.0])


class TestStrongMHull:
    def test_yes(self, strong_m_3_2, hull_settings):
        h = hull_new(strong_m_3_2, z_upper(strong_m_3_2, -0.5, 5.0))
        result = hull_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.YES
        assert set(result.endpoint_verdicts) == {'lower', 'upper'}
        for seed in range(100):
            assert classify_m(sample(h, seed=seed)).label == VerdictLabel.STRONG_M

    def test_upper_not_z(self, strong_m_3_2, hull_settings):
        data = np.array(z_upper(strong_m_3_2, -0.5, 5.0).data)
        data[0, 1, 1] = 0.1
        h = hull_new(strong_m_3_2, Tensor(data))
        result = hull_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert compare(result.witness_member, h.upper).eq

    def test_lower_not_strong(self, boundary_m_3_2, hull_settings):
        h = hull_new(boundary_m_3_2, z_upper(boundary_m_3_2, -0.5, 4.0))
        result = hull_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert compare(result.witness_member, h.lower).eq
        assert result.member_verdict.label == VerdictLabel.M

    def test_random_violations_have_members(self, rng, hull_settings):
        for seed in range(10):
            A = Tensor(rng.standard_normal((3, 3, 3)))
            h = hull_new(A, Tensor(A.data + 0.2))
            result = hull_is_strong_m(h, hull_settings)
            if result.label == VerdictLabel.CERTIFIED_NO:
                assert contains(h, result.witness_member)
                assert classify_m(result.witness_member).label != VerdictLabel.STRONG_M

    @pytest.mark.parametrize("seed", range(100))
    def test_random_yes_hulls(self, seed, hull_settings):
        h = hull_new(*strong_m_endpoints(seed, margin=0.3))
        result = hull_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.YES
        certificates = hull_certificates(result, h)
        assert len(certificates) == 3
        assert all(check_certificate(c)[0] for c in certificates)
        for sample_seed in range(5):
            assert classify_m(sample(h, seed=sample_seed)).label == VerdictLabel.STRONG_M

    @pytest.mark.parametrize("seed", range(100))
    def test_random_violating_hulls(self, seed, hull_settings):
        lower, upper = strong_m_endpoints(seed, margin=0.3 if seed % 2 else -0.5)
        if seed % 2:
            data = np.array(upper.data)
            data[0, 1, 2] = 0.1
            upper = Tensor(data)
        h = hull_new(lower, upper)
        result = hull_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert contains(h, result.witness_member)
        assert classify_m(result.witness_member).label != VerdictLabel.STRONG_M
        certificates = hull_certificates(result, h)
        assert len(certificates) == 2
        assert all(check_certificate(c)[0] for c in certificates)


class TestInteriorStrongM:
    @pytest.mark.parametrize("seed", range(100))
    def test_random_boundary_lower(self, seed, hull_settings):
        h = hull_new(*strong_m_endpoints(seed, margin=0.0))
        assert classify_m(h.lower).label == VerdictLabel.M
        result = interior_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.YES
        for sample_seed in range(5):
            member = sample(h, seed=sample_seed, interior=True)
            assert classify_m(member).label == VerdictLabel.STRONG_M

    def test_yes_with_boundary_lower(self, boundary_m_3_2, hull_settings):
        h = hull_new(boundary_m_3_2, z_upper(boundary_m_3_2, -0.5, 4.0))
        result = interior_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.YES
        assert result.interior
        for seed in range(100):
            assert classify_m(sample(h, seed=seed, interior=True)).label == VerdictLabel.STRONG_M

    def test_degenerate_strong(self, strong_m_3_2, hull_settings):
        h = hull_new(strong_m_3_2, strong_m_3_2)
        assert interior_is_strong_m(h, hull_settings).label == VerdictLabel.YES

    def test_lower_not_z(self, strong_m_3_2, hull_settings):
        data = np.array(strong_m_3_2.data)
        data[0, 1, 1] = 0.5
        upper = Tensor(np.maximum(data, 0.0) + 1.0)
        h = hull_new(Tensor(data), upper)
        result = interior_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert contains(h, result.witness_member, interior=True)

    def test_upper_not_strong_means_no_interior_member_is(self, boundary_m_3_2, hull_settings):
        h = hull_new(boundary_m_3_2, boundary_m_3_2)
        result = interior_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert result.member_verdict.label == VerdictLabel.M

        wider = hull_new(Tensor(boundary_m_3_2.data - 0.5), boundary_m_3_2)
        result = interior_is_strong_m(wider, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert contains(wider, result.witness_member, interior=True)
        assert result.member_verdict.label == VerdictLabel.Z_NOT_M

    def test_lower_not_m_interior_witness(self, make_z, hull_settings):
        lower = make_z(3, 2, 2.0, -1.0)
        h = hull_new(lower, make_z(3, 2, 5.0, -0.5))
        result = interior_is_strong_m(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert contains(h, result.witness_member, interior=True)
        assert classify_m(result.witness_member).label == VerdictLabel.Z_NOT_M


class TestVertexClasses:
    def test_worked_example(self, worked_matrix_hull, hull_settings):
        h = worked_matrix_hull
        psd = hull_is_psd(h, hull_settings)
        assert psd.label == VerdictLabel.YES
        assert len(psd.vertex_records) == 4
        assert psd.vertex_evaluations == 2

        pd = hull_is_pd(h, hull_settings)
        assert pd.label == VerdictLabel.CERTIFIED_NO
        assert np.allclose(np.abs(pd.witness_vector), [1.0, 1.0])

        p = hull_is_p(h, hull_settings)
        assert p.label == VerdictLabel.CERTIFIED_NO
        assert is_p(p.witness_member).label == VerdictLabel.CERTIFIED_NO
        assert contains(h, p.witness_member)

        assert hull_is_p0(h, hull_settings).label == VerdictLabel.YES

    def test_degenerate_identity_p(self, hull_settings):
        h = hull_new(identity(2, 3), identity(2, 3))
        assert hull_is_p(h, hull_settings).label == VerdictLabel.YES

    def test_negative_diagonal_vertex(self, hull_settings):
        lower = new_dense(2, 2, [-1, 0, 0, 1])
        h = hull_new(lower, new_dense(2, 2, [2, 0, 0, 2]))
        result = hull_is_p(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert np.count_nonzero(result.witness_vector) == 1

    def test_odd_order_pd(self, rng, hull_settings):
        h = random_hull(rng, 3, 3)
        result = hull_is_pd(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert result.vertex_evaluations == 1

    def test_odd_order_enumerates_all_vertices(self, rng, hull_settings):
        h = random_hull(rng, 3, 2)
        result = hull_is_psd(h, hull_settings)
        assert result.label == VerdictLabel.CERTIFIED_NO
        assert result.vertex_evaluations == 4

    def test_vertex_cap(self, hull_settings):
        settings = HullSettings(vertex_cap=2, threads=1)
        h = hull_new(identity(2, 3), identity(2, 3))
        with pytest.raises(VertexCapException):
            hull_is_psd(h, settings)

    def test_verdicts_independent_of_threads(self, rng, budget):
        h = random_hull(rng, 2, 3)
        single = HullCertifier(HullSettings(threads=1, budget=budget)).certify(h, TensorClass.P0)
        many = HullCertifier(HullSettings(threads=4, budget=budget)).certify(h, TensorClass.P0)
        assert single.to_dict() == many.to_dict()

    def test_matrix_hulls_agree_with_oracle(self, rng, hull_settings):
        certifier = HullCertifier(hull_settings)
        for _ in range(30):
            n = int(rng.integers(2, 4))
            base = rng.standard_normal((n, n)) + np.eye(n) * 2
            h = hull_new(Tensor(base - rng.random((n, n)) * 0.5), Tensor(base + rng.random((n, n)) * 0.5))
            signs = [z for z, _ in iter_vertices(h)]
            for cls in (TensorClass.PSD, TensorClass.P, TensorClass.P0):
                result = certifier.certify(h, cls)
                vertices_hold = all(matrix_in_class(vertex_tensor(h, z).data, cls) for z in signs)
                if result.label == VerdictLabel.YES:
                    assert vertices_hold
                    for seed in range(50):
                        assert matrix_in_class(sample(h, seed=seed).data, cls)
                elif result.label == VerdictLabel.CERTIFIED_NO:
                    assert not matrix_in_class(result.witness_member.data, cls)
                    assert not vertices_hold
