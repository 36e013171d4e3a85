import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ihwt.combinatorics import max_support_size
from ihwt.core import DimensionError, EnumerationLimitError, NumericalError, WeightVector
from ihwt.sensing import (
    adjoint_apply,
    apply,
    check_rip_bounds,
    gaussian_matrix,
    rip_constant,
    spectral_norm,
)
from builders import small_gaussian
from oracles import brute_rip


class TestGaussianMatrix:
    def test_column_norms_concentrate(self):
        for seed in range(200):
            norms = np.linalg.norm(gaussian_matrix(128, 256, seed), axis=0)
            assert norms.min() >= 0.7 and norms.max() <= 1.3

    def test_spectral_scaling(self):
        for seed in range(5):
            a = gaussian_matrix(4, 4, seed, scaling="spectral", c=0.9)
            assert abs(np.linalg.norm(a, 2) - 0.9) <= 1e-10

    def test_spectral_needs_contraction(self):
        with pytest.raises(ValueError):
            gaussian_matrix(4, 4, 0, scaling="spectral", c=1.0)

    def test_deterministic(self):
        assert np.array_equal(gaussian_matrix(5, 7, 11), gaussian_matrix(5, 7, 11))
        assert not np.array_equal(gaussian_matrix(5, 7, 11), gaussian_matrix(5, 7, 12))


class TestApply:
    def test_identity_and_scaling(self):
        x = np.array([1.0, -2.0, 3.0])
        assert np.array_equal(apply(np.eye(3), x), x)
        assert np.array_equal(apply(2 * np.eye(3), x), 2 * x)

    def test_dimension_errors(self):
        with pytest.raises(DimensionError):
            apply(np.eye(3), np.ones(2))
        with pytest.raises(DimensionError):
            adjoint_apply(np.ones((2, 3)), np.ones(3))

    @given(st.integers(0, 10_000))
    def test_adjoint_consistency(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((7, 11))
        x, y = rng.standard_normal(11), rng.standard_normal(7)
        lhs, rhs = apply(a, x) @ y, x @ adjoint_apply(a, y)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestSpectralNorm:
    def test_examples(self):
        assert spectral_norm(np.eye(4)) == pytest.approx(1.0, abs=1e-12)
        assert spectral_norm(np.diag([3.0, 1.0, 0.5])) == pytest.approx(3.0, abs=1e-12)

    def test_against_svd(self):
        for seed in range(20):
            a = np.random.default_rng(seed).standard_normal((10, 10))
            ref = np.linalg.svd(a, compute_uv=False)[0]
            assert spectral_norm(a) == pytest.approx(ref, rel=1e-8)

    def test_iteration_cap(self):
        a = np.diag([1.0, 0.999999, 0.5])
        with pytest.raises(NumericalError):
            spectral_norm(a, tol=1e-15, max_iter=3)


class TestRipConstant:
    def test_identity(self):
        assert rip_constant(np.eye(6), WeightVector.sqrt_index(6), 5).delta == 0.0

    def test_scaled_identity(self):
        assert rip_constant(2 * np.eye(6), WeightVector.sqrt_index(6), 1).delta == pytest.approx(3.0)

    def test_refuses_large(self):
        with pytest.raises(EnumerationLimitError):
            rip_constant(np.ones((3, 30)), None, 2)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_bruteforce(self, seed):
        rng = np.random.default_rng(seed)
        a = small_gaussian(6, 10, seed)
        sq = rng.integers(1, 4, 10).astype(float)
        for s in (1, 3, 5.5):
            got = rip_constant(a, WeightVector(np.sqrt(sq)), s).delta
            assert got == pytest.approx(brute_rip(a, sq, s), rel=1e-10, abs=1e-12)

    def test_unit_weights_are_unweighted(self):
        a = small_gaussian(8, 12, 3)
        assert rip_constant(a, np.ones(12), 3.7).delta == rip_constant(a, None, 3).delta

    @pytest.mark.parametrize("seed", range(5))
    def test_below_unweighted_of_max_size(self, seed):
        rng = np.random.default_rng(seed)
        a = small_gaussian(10, 16, seed)
        w = WeightVector(np.sqrt(rng.choice([1, 2, 4], 16)))
        s = 6
        k = max_support_size(w, s)
        assert rip_constant(a, w, s).delta <= rip_constant(a, None, k).delta + 1e-12

    def test_nondecreasing_in_budget(self):
        a = small_gaussian(10, 14, 9)
        w = WeightVector.sqrt_index(14)
        deltas = [rip_constant(a, w, s).delta for s in range(0, 16)]
        assert all(d1 <= d2 for d1, d2 in zip(deltas, deltas[1:]))

    def test_heavy_columns_ignored(self):
        # with w_j = sqrt(j) and s = 10 no feasible support reaches columns 11..16
        a = small_gaussian(10, 16, 4)
        w = WeightVector.sqrt_index(16)
        k = max_support_size(w, 10)
        before_w, before_u = rip_constant(a, w, 10).delta, rip_constant(a, None, k).delta
        b = a.copy()
        b[:, 15] *= 3.0
        assert rip_constant(b, w, 10).delta == before_w
        assert rip_constant(b, None, k).delta != before_u


class TestRipBounds:
    def test_identity(self):
        rep = check_rip_bounds(np.eye(8), WeightVector.sqrt_index(8), trials=100, seed=0)
        assert rep.ok
        assert all(m >= 0 for m in rep.worst_margin.values())

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_instance(self, seed):
        rng = np.random.default_rng(seed)
        a = small_gaussian(10, 16, seed)
        w = WeightVector(np.sqrt(rng.choice([1, 2, 4], 16)))
        rep = check_rip_bounds(a, w, trials=200, seed=seed)
        assert rep.ok, rep.violations

    def test_empty_restriction(self):
        # budget 0 admits only the empty set, so every left side is zero
        a = small_gaussian(5, 6, 0)
        rep = check_rip_bounds(a, np.ones(6), trials=20, seed=0, budgets=[0.0])
        assert rep.ok
