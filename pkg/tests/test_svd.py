"""
Tests for the polar-decomposition SVD.
"""

from functools import partial

import numpy as np
import pytest

from apps.bench.matrices import gen_synthetic
from apps.core.exceptions import DomainError, NonConvergenceError, ShapeError, UsageError
from apps.elliptic.zolotarev import RPolicy
from apps.linalg.factorizations import sym_eig
from apps.parallel.plan import plan_groups
from apps.polar.types import QDWH, ZOLO
from apps.polar.zolo import zolo_pd
from apps.svd import services
from apps.svd.metrics import metrics
from apps.svd.services import BOUNDS_ESTIMATED, BOUNDS_OVERRIDE, SvdOptions, polar_svd

TIMING_KEYS = {
    "bounds_seconds",
    "pd_seconds",
    "qr_seconds",
    "chol_seconds",
    "combine_seconds",
    "eig_seconds",
    "total_seconds",
}


def assert_svd(a, result, res=1e-13, orth=1e-14):
    """Check the SvdResult invariants."""
    assert result.metrics.res <= res
    assert result.metrics.orth_l <= orth
    assert result.metrics.orth_r <= orth
    assert np.all(result.sigma >= 0.0)
    assert np.all(np.diff(result.sigma) <= 0.0)
    reference = np.linalg.svd(a, compute_uv=False)
    np.testing.assert_allclose(result.sigma, reference, rtol=1e-12, atol=1e-13 * reference[0])


class TestPolarSvd:
    """Tests for polar_svd."""

    @pytest.mark.parametrize("method", [ZOLO, QDWH])
    def test_synthetic(self, method):
        """Test both methods on a kappa = 1e6 matrix."""
        a = gen_synthetic(80, 1e6, seed=21)
        result = polar_svd(a, method, SvdOptions(nb=16))
        assert result.method == method
        assert result.bounds_source == BOUNDS_ESTIMATED
        assert result.u.shape == (80, 80)
        assert result.v.shape == (80, 80)
        assert_svd(a, result)
        assert result.sigma[0] == pytest.approx(1.0, rel=1e-12)
        assert result.sigma[-1] == pytest.approx(1e-6, rel=1e-8)

    def test_zolo_order_follows_kappa(self):
        """Test the table picks r = 4 for kappa = 1e3 under r_max = 8."""
        a = gen_synthetic(50, 1e3, seed=22)
        result = polar_svd(a, ZOLO, SvdOptions(alpha=1.0, beta=1e-3))
        assert result.r == 4
        assert 2 <= result.pd_iters <= 3
        assert_svd(a, result)

    def test_fixed_order(self):
        """Test a fixed r policy overrides the table."""
        a = gen_synthetic(40, 1e4, seed=23)
        result = polar_svd(a, ZOLO, SvdOptions(r_policy=RPolicy.fixed(2)))
        assert result.r == 2
        assert_svd(a, result)

    def test_qdwh_reports_r_one(self):
        """Test QDWH results report r = 1."""
        a = gen_synthetic(30, 1e2, seed=24)
        assert polar_svd(a, QDWH).r == 1

    def test_tall(self, rng):
        """Test a tall matrix gives a thin factorization."""
        a = rng.standard_normal((90, 40))
        result = polar_svd(a, ZOLO, SvdOptions(nb=16))
        assert result.u.shape == (90, 40)
        assert result.sigma.shape == (40,)
        assert result.v.shape == (40, 40)
        assert_svd(a, result)

    def test_wide_swaps_factors(self, rng):
        """Test m < n runs on the transpose and swaps U and V."""
        a = rng.standard_normal((30, 70))
        result = polar_svd(a, QDWH, SvdOptions(nb=16))
        assert result.u.shape == (30, 30)
        assert result.v.shape == (70, 30)
        assert_svd(a, result)
        np.testing.assert_allclose((result.u * result.sigma) @ result.v.T, a, atol=1e-12)

    def test_rank_deficient_clamps(self):
        """Test zero singular values come back as non-negative."""
        a = np.zeros((10, 10))
        a[0, 0] = 1.0
        a[1, 1] = 0.5
        result = polar_svd(a, QDWH, SvdOptions(alpha=1.0, beta=0.5))
        assert np.all(result.sigma >= 0.0)
        assert result.sigma[0] == pytest.approx(1.0)
        assert result.sigma[1] == pytest.approx(0.5)
        assert result.metrics.min_eigenvalue is not None

    def test_bounds_override(self):
        """Test explicit bounds are used as given."""
        a = gen_synthetic(30, 10.0, seed=25)
        result = polar_svd(a, ZOLO, SvdOptions(alpha=2.0, beta=0.05))
        assert result.bounds_source == BOUNDS_OVERRIDE
        assert result.bounds.alpha == 2.0
        assert result.bounds.beta == 0.05
        assert_svd(a, result)

    def test_bounds_override_clamps_beta(self):
        """Test beta above alpha is clamped to alpha."""
        a = np.eye(5)
        result = polar_svd(a, QDWH, SvdOptions(alpha=1.0, beta=3.0))
        assert result.bounds.beta == 1.0
        np.testing.assert_allclose(result.sigma, np.ones(5), rtol=1e-14)

    def test_plan_is_replanned_for_r(self):
        """Test a plan with the wrong group count is rebuilt over the same budget."""
        a = gen_synthetic(30, 1e4, seed=26)
        result = polar_svd(a, ZOLO, SvdOptions(plan=plan_groups(8, 2), r_policy=RPolicy.fixed(4)))
        assert result.r == 4
        assert_svd(a, result, res=1e-12)

    def test_timings(self):
        """Test the stage timings are present and add up."""
        a = gen_synthetic(40, 1e5, seed=27)
        result = polar_svd(a, ZOLO)
        assert set(result.timings) == TIMING_KEYS
        assert all(value >= 0.0 for value in result.timings.values())
        assert result.timings["total_seconds"] >= result.timings["pd_seconds"]
        assert result.timings["qr_seconds"] > 0.0

    def test_unknown_method(self):
        """Test an unknown method is rejected."""
        with pytest.raises(DomainError):
            polar_svd(np.eye(3), "jacobi")

    def test_non_convergence_names_order_and_kappa(self, monkeypatch):
        """Test a failed decomposition carries r and the bound ratio."""
        monkeypatch.setattr(services, "zolo_pd", partial(zolo_pd, max_passes=1))
        a = gen_synthetic(30, 1e8, seed=28)
        opts = SvdOptions(alpha=1.0, beta=1e-8, r_policy=RPolicy.fixed(1))
        with pytest.raises(NonConvergenceError) as excinfo:
            polar_svd(a, ZOLO, opts)
        assert excinfo.value.r == 1
        assert excinfo.value.kappa == pytest.approx(1e8)


class TestSvdInvariants:
    """Tests for properties every SVD path shares."""

    def test_methods_agree(self):
        """Test zolo and qdwh give the same sigma and comparable metrics."""
        a = gen_synthetic(60, 1e3, seed=31)
        zolo = polar_svd(a, ZOLO, SvdOptions(nb=16))
        qdwh = polar_svd(a, QDWH, SvdOptions(nb=16))
        np.testing.assert_allclose(zolo.sigma, qdwh.sigma, rtol=1e-12)
        for field in ("res", "orth_l", "orth_r"):
            pair = sorted([getattr(zolo.metrics, field), getattr(qdwh.metrics, field)])
            assert pair[1] <= 10.0 * pair[0] + 1e-15, field

    def test_orthogonal_invariance(self, orthogonal):
        """Test sigma(Q A Z) equals sigma(A) for orthogonal Q and Z."""
        a = gen_synthetic(50, 1e2, seed=32)
        rotated = orthogonal(50) @ a @ orthogonal(50)
        expected = polar_svd(a, ZOLO).sigma
        np.testing.assert_allclose(polar_svd(rotated, ZOLO).sigma, expected, rtol=1e-12)
        np.testing.assert_allclose(polar_svd(rotated, QDWH).sigma, expected, rtol=1e-12)

    def test_symmetric_positive_definite(self, orthogonal):
        """Test sigma of a symmetric PSD matrix is its spectrum in descending order."""
        q = orthogonal(40)
        eigenvalues = np.logspace(0.0, -2.0, 40)
        a = (q * eigenvalues) @ q.T
        a = 0.5 * (a + a.T)
        expected = sym_eig(a).eigenvalues[::-1]
        for method in (ZOLO, QDWH):
            np.testing.assert_allclose(polar_svd(a, method).sigma, expected, rtol=1e-12)


class TestSvdOptions:
    """Tests for option validation."""

    def test_half_override(self):
        """Test alpha without beta is a usage error."""
        with pytest.raises(UsageError):
            SvdOptions(alpha=1.0)
        with pytest.raises(UsageError):
            SvdOptions(beta=1.0)


class TestMetrics:
    """Tests for the accuracy metrics."""

    def test_exact_factorization(self):
        """Test an exact SVD scores zero."""
        a = np.diag([3.0, 2.0, 1.0])
        result = metrics(a, np.eye(3), [3.0, 2.0, 1.0], np.eye(3))
        assert result.res == 0.0
        assert result.orth_l == 0.0
        assert result.orth_r == 0.0
        assert result.min_eigenvalue is None

    def test_residual_scaled_by_two_norm(self):
        """Test res is the Frobenius residual over ||A||_2."""
        a = np.diag([2.0, 1.0])
        result = metrics(a, np.eye(2), [2.0, 0.0], np.eye(2))
        assert result.res == pytest.approx(0.5)

    def test_shape_mismatch(self):
        """Test non-conforming factors raise ShapeError."""
        with pytest.raises(ShapeError):
            metrics(np.eye(3), np.eye(3), [1.0, 1.0], np.eye(3))

    def test_as_dict(self):
        """Test the metrics payload."""
        payload = metrics(np.eye(2), np.eye(2), [1.0, 1.0], np.eye(2)).as_dict()
        assert set(payload) == {"res", "orth_l", "orth_r", "min_eigenvalue"}

    def test_perturbed_left_factor(self):
        """Test one off-diagonal entry of 1e-8 in U gives orth_l of 1e-8 * sqrt(2) / n."""
        n = 10
        u = np.eye(n)
        u[3, 7] = 1e-8
        result = metrics(np.eye(n), u, np.ones(n), np.eye(n))
        assert result.orth_l == pytest.approx(1e-8 * np.sqrt(2.0) / n, rel=1e-6)
        assert result.orth_r == 0.0

    def test_dropped_singular_value(self):
        """Test zeroing sigma_min of a kappa = 1e3 matrix gives res of about 1e-3."""
        a = gen_synthetic(100, 1e3, seed=33)
        u, sigma, vt = np.linalg.svd(a)
        sigma[-1] = 0.0
        assert metrics(a, u, sigma, vt.T).res == pytest.approx(1e-3, rel=1e-2)
