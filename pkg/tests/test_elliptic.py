"""
Tests for elliptic functions and the Zolotarev machinery.
"""

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.optimize
import scipy.signal
import scipy.special

from apps.core.exceptions import DomainError, UnsupportedOrderError
from apps.elliptic.functions import complete_elliptic_K, jacobi_sn_cn_dn
from apps.elliptic.zolotarev import (
    CONVERGED_EDGE,
    KAPPA_GRID,
    RPolicy,
    choose_r,
    clamp_ell,
    ell_update,
    iteration_table,
    predict_iterations,
    zolotarev_coeffs,
    zolotarev_eval,
    zolotarev_eval_partial_fraction,
)
from apps.polar.qdwh import qdwh_weights

# Pass counts for r = 1..8 (rows) over KAPPA_GRID (columns).
REFERENCE_TABLE = (
    (2, 2, 2, 3, 3, 3, 4, 4, 4, 5, 5, 6),
    (1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4),
    (1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3),
    (1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3),
    (1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3),
    (1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3),
    (1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 3),
    (1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2),
)


def weighted_halley(x, a, b, c):
    return x * (a + b * x * x) / (1.0 + c * x * x)


def max_min_weights(ell, grid=2001):
    """
    Solve max_{a,b,c} min_{x in [ell, 1]} x(a + bx^2)/(1 + cx^2) subject to
    the map staying in (0, 1] on [ell, 1].

    A bisection on the attained minimum t with linear feasibility problems
    on a grid, refined by solving the four-point alternation conditions.
    """
    x = np.linspace(ell, 1.0, grid)

    def feasible(t):
        a_ub = np.vstack([
            np.column_stack([-x, -x**3, t * x**2]),
            np.column_stack([x, x**3, -x**2]),
        ])
        b_ub = np.concatenate([np.full(grid, -t), np.ones(grid)])
        result = scipy.optimize.linprog(
            np.zeros(3), A_ub=a_ub, b_ub=b_ub, bounds=[(0.0, None)] * 3, method="highs"
        )
        return result.x if result.status == 0 else None

    low, high, weights = ell, 1.0, np.array([1.0, 0.0, 0.0])
    for _ in range(60):
        middle = 0.5 * (low + high)
        found = feasible(middle)
        if found is None:
            high = middle
        else:
            low, weights = middle, found

    values = weighted_halley(x, *weights)
    x1 = x[scipy.signal.argrelmax(values)[0][0]]
    x2 = x[scipy.signal.argrelmin(values)[0][-1]]

    def conditions(unknowns):
        a, b, c, t, p, q = unknowns

        def slope(s):
            return (a + 3.0 * b * s * s) * (1.0 + c * s * s) - (a * s + b * s**3) * 2.0 * c * s

        return [
            weighted_halley(ell, a, b, c) - t,
            weighted_halley(p, a, b, c) - 1.0,
            slope(p),
            weighted_halley(q, a, b, c) - t,
            slope(q),
            weighted_halley(1.0, a, b, c) - 1.0,
        ]

    solution = scipy.optimize.fsolve(conditions, [*weights, low, x1, x2], xtol=1e-15)
    return solution[:3]


class TestCompleteEllipticK:
    """Tests for the complete elliptic integral."""

    def test_zero_modulus(self):
        """Test K(0) = pi/2."""
        assert complete_elliptic_K(0.0) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_lemniscatic_value(self):
        """Test K(1/sqrt(2))."""
        assert complete_elliptic_K(1.0 / math.sqrt(2.0)) == pytest.approx(1.8540746773013719, rel=1e-14)

    @pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.99, 0.999])
    def test_against_scipy(self, k):
        """Test against scipy.special.ellipk, which takes m = k^2."""
        assert complete_elliptic_K(k) == pytest.approx(scipy.special.ellipk(k * k), rel=1e-12)

    def test_against_quadrature(self):
        """Test against direct quadrature of the defining integral."""
        k = 0.8
        value, _ = scipy.integrate.quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0.0, math.pi / 2)
        assert complete_elliptic_K(k) == pytest.approx(value, rel=1e-12)

    def test_explicit_complement(self):
        """Test moduli within 1e-16 of one through the complement."""
        kp = 1e-16
        assert complete_elliptic_K(1.0, kp=kp) == pytest.approx(math.log(4.0 / kp), rel=1e-13)

    def test_monotone(self):
        """Test K increases with the modulus."""
        values = [complete_elliptic_K(k) for k in np.linspace(0.0, 0.999, 50)]
        assert np.all(np.diff(values) > 0.0)

    @pytest.mark.parametrize("k", [1.0, -0.1, 1.5, math.nan])
    def test_domain(self, k):
        """Test moduli outside [0, 1) are rejected."""
        with pytest.raises(DomainError):
            complete_elliptic_K(k)


class TestJacobi:
    """Tests for sn, cn and dn."""

    def test_zero_argument(self):
        """Test sn(0) = 0, cn(0) = dn(0) = 1."""
        assert tuple(jacobi_sn_cn_dn(0.0, 0.7)) == (0.0, 1.0, 1.0)

    def test_zero_modulus(self):
        """Test the trigonometric limit."""
        sn, cn, dn = jacobi_sn_cn_dn(0.7, 0.0)
        assert sn == pytest.approx(math.sin(0.7), rel=1e-15)
        assert cn == pytest.approx(math.cos(0.7), rel=1e-15)
        assert dn == 1.0

    @pytest.mark.parametrize("k", [0.1, 0.5, 0.7, 0.8, 0.95, 0.999])
    def test_against_scipy(self, k):
        """Test against scipy.special.ellipj over several periods."""
        for u in np.linspace(-5.0, 5.0, 21):
            sn, cn, dn = jacobi_sn_cn_dn(u, k)
            expected = scipy.special.ellipj(u, k * k)
            assert sn == pytest.approx(expected[0], abs=1e-10)
            assert cn == pytest.approx(expected[1], abs=1e-10)
            assert dn == pytest.approx(expected[2], abs=1e-10)

    @pytest.mark.parametrize("k", [0.3, 0.9, 0.999999])
    def test_identities(self, k):
        """Test sn^2 + cn^2 = 1 and dn^2 + k^2 sn^2 = 1."""
        for u in np.linspace(0.0, 4.0 * complete_elliptic_K(k), 33):
            sn, cn, dn = jacobi_sn_cn_dn(u, k)
            assert sn * sn + cn * cn == pytest.approx(1.0, abs=1e-13)
            assert dn * dn + k * k * sn * sn == pytest.approx(1.0, abs=1e-13)

    def test_quarter_period(self):
        """Test sn(K) = 1 and cn(K) = 0."""
        k = 0.95
        sn, cn, dn = jacobi_sn_cn_dn(complete_elliptic_K(k), k)
        assert sn == pytest.approx(1.0, abs=1e-14)
        assert cn == pytest.approx(0.0, abs=1e-13)
        assert dn == pytest.approx(math.sqrt(1.0 - k * k), rel=1e-12)

    def test_domain(self):
        """Test invalid modulus and argument."""
        with pytest.raises(DomainError):
            jacobi_sn_cn_dn(0.5, 1.0)
        with pytest.raises(DomainError):
            jacobi_sn_cn_dn(math.inf, 0.5)


class TestZolotarevCoeffs:
    """Tests for the Zolotarev coefficients."""

    @pytest.mark.parametrize("r", range(1, 9))
    def test_structure(self, r):
        """Test c is positive and increasing and the weights are positive."""
        p = zolotarev_coeffs(r, 1e-3)
        assert p.c.shape == (2 * r,)
        assert np.all(p.c > 0.0)
        assert np.all(np.diff(p.c) > 0.0)
        assert np.all(p.a > 0.0)
        assert p.m_hat > 0.0

    @pytest.mark.parametrize("r", [0, 9, 2.5])
    def test_unsupported_order(self, r):
        """Test orders outside 1..8 are rejected."""
        with pytest.raises(UnsupportedOrderError):
            zolotarev_coeffs(r, 0.1)

    @pytest.mark.parametrize("ell", [0.0, 1.0, -0.5, 2.0])
    def test_ell_domain(self, ell):
        """Test ell outside (0, 1) is rejected."""
        with pytest.raises(DomainError):
            zolotarev_coeffs(2, ell)

    @pytest.mark.parametrize("r", range(1, 9))
    @pytest.mark.parametrize("ell", [1e-1, 1e-3, 1e-5])
    def test_partial_fraction_agrees(self, r, ell):
        """Test product and partial-fraction forms agree."""
        p = zolotarev_coeffs(r, ell)
        x = np.linspace(ell, 1.0, 1000)
        product = zolotarev_eval(x, p)
        partial = zolotarev_eval_partial_fraction(x, p)
        np.testing.assert_allclose(partial, product, rtol=1e-12)

    @pytest.mark.parametrize("r", [1, 3, 8])
    def test_maps_into_unit_interval(self, r):
        """Test [ell, 1] is mapped into (0, 1] with Z(1) = 1."""
        ell = 1e-4
        p = zolotarev_coeffs(r, ell)
        values = zolotarev_eval(np.linspace(ell, 1.0, 2000), p)
        assert np.all(values > 0.0)
        assert np.all(values <= 1.0 + 1e-14)
        assert zolotarev_eval(1.0, p) == pytest.approx(1.0, abs=1e-14)

    def test_odd(self):
        """Test Z(-x) = -Z(x)."""
        p = zolotarev_coeffs(4, 1e-2)
        x = np.linspace(1e-2, 1.0, 101)
        np.testing.assert_array_equal(zolotarev_eval(-x, p), -zolotarev_eval(x, p))

    def test_scalar_in_scalar_out(self):
        """Test scalars stay scalars."""
        p = zolotarev_coeffs(2, 0.1)
        assert isinstance(zolotarev_eval(0.5, p), float)
        assert isinstance(zolotarev_eval_partial_fraction(0.5, p), float)

    @pytest.mark.parametrize("ell", [0.5, 0.1, 1e-2])
    def test_order_one_is_qdwh(self, ell):
        """Test the r = 1 function is the weighted Halley map x(a + bx^2)/(1 + cx^2)."""
        p = zolotarev_coeffs(1, ell)
        a, b, c = qdwh_weights(ell)
        x = np.linspace(ell, 1.0, 200)
        halley = x * (a + b * x * x) / (1.0 + c * x * x)
        np.testing.assert_allclose(zolotarev_eval(x, p), halley, rtol=1e-10)

    @pytest.mark.parametrize("ell", [0.5, 0.1, 1e-2])
    def test_order_one_solves_max_min(self, ell):
        """Test the r = 1 function is the numerically optimal weighted Halley map on [ell, 1]."""
        a, b, c = max_min_weights(ell)
        x = np.linspace(ell, 1.0, 200)
        expected = weighted_halley(x, a, b, c)
        np.testing.assert_allclose(zolotarev_eval(x, zolotarev_coeffs(1, ell)), expected, rtol=1e-10)
        assert np.max(expected) <= 1.0 + 1e-12

    @pytest.mark.parametrize("r", range(2, 9))
    def test_higher_order_is_closer_to_sign(self, r):
        """Test the error on [ell, 1] drops as r grows past one."""
        ell = 1e-2
        x = np.linspace(ell, 1.0, 2000)
        base = np.max(np.abs(1.0 - zolotarev_eval(x, zolotarev_coeffs(1, ell))))
        higher = np.max(np.abs(1.0 - zolotarev_eval(x, zolotarev_coeffs(r, ell))))
        assert higher < base


class TestEllUpdate:
    """Tests for the interval-edge update."""

    def test_matches_evaluation(self):
        """Test the update is Z(ell)."""
        p = zolotarev_coeffs(2, 1e-2)
        assert ell_update(p) == zolotarev_eval(1e-2, p)

    def test_monotone(self):
        """Test the edge only moves towards one."""
        for r in range(1, 9):
            for ell in (1e-8, 1e-3, 0.5, 0.99):
                assert ell_update(zolotarev_coeffs(r, ell)) >= ell

    def test_two_compositions_r3(self):
        """Test two r = 3 passes from 1e-5 are not yet converged."""
        ell_1 = ell_update(zolotarev_coeffs(3, 1e-5))
        ell_2 = ell_update(zolotarev_coeffs(3, clamp_ell(ell_1)))
        assert ell_1 < ell_2 < CONVERGED_EDGE

    def test_clamp(self):
        """Test clamping keeps the edge inside (0, 1)."""
        assert clamp_ell(1.0) < 1.0
        assert clamp_ell(0.3) == 0.3


class TestPredictIterations:
    """Tests for the iteration-count predictor."""

    def test_reference_table(self):
        """Test the predicted counts over the full r x kappa grid."""
        table = iteration_table()
        for r, row in enumerate(REFERENCE_TABLE, start=1):
            for kappa, expected in zip(KAPPA_GRID, row):
                assert table[(r, kappa)] == expected, f"r={r} kappa={kappa:g}"

    @pytest.mark.parametrize("r,kappa,expected", [(2, 1e16, 4), (3, 1e16, 3), (7, 2.0, 1), (8, 1e16, 2)])
    def test_guard_points_at_the_edges(self, r, kappa, expected):
        """Test guard points rounding at ell or near one cost no extra pass."""
        assert predict_iterations(kappa, r) == expected

    def test_never_increases_with_r(self):
        """Test a larger order never needs more passes."""
        for kappa in KAPPA_GRID:
            counts = [predict_iterations(kappa, r) for r in range(1, 9)]
            assert counts == sorted(counts, reverse=True)

    def test_kappa_one(self):
        """Test an orthogonal matrix needs one pass."""
        assert predict_iterations(1.0, 1) == 1

    @pytest.mark.parametrize("kappa", [0.5, -1.0, math.inf, math.nan])
    def test_domain(self, kappa):
        """Test invalid condition numbers are rejected."""
        with pytest.raises(DomainError):
            predict_iterations(kappa, 2)


class TestChooseR:
    """Tests for the order selection."""

    def test_large_kappa(self):
        """Test kappa = 1e16 needs r = 8 for two passes."""
        assert choose_r(1e16, 8) == (8, 2)

    def test_small_kappa(self):
        """Test the smallest order reaching two passes is chosen."""
        assert choose_r(1.001, 8) == (1, 2)
        assert choose_r(1e3, 8) == (4, 2)

    def test_r_max_cap(self):
        """Test r_max caps the order when two passes are out of reach."""
        assert choose_r(1e16, 3) == (3, 3)

    def test_fixed_policy(self):
        """Test a fixed policy keeps its order."""
        assert choose_r(2.0, 8, RPolicy.fixed(1)) == (1, 3)

    def test_domain(self):
        """Test kappa below one is rejected."""
        with pytest.raises(DomainError):
            choose_r(0.5)


class TestRPolicy:
    """Tests for the order policy."""

    def test_parse(self):
        """Test table and fixed policies parse and print back."""
        assert RPolicy.parse("table") == RPolicy.table()
        assert RPolicy.parse("fixed:3") == RPolicy.fixed(3)
        assert str(RPolicy.parse(" Fixed:5 ")) == "fixed:5"

    @pytest.mark.parametrize("text", ["bogus", "fixed:", "fixed:x"])
    def test_parse_invalid(self, text):
        """Test unknown policies are rejected."""
        with pytest.raises(DomainError):
            RPolicy.parse(text)

    def test_fixed_order_range(self):
        """Test a fixed order outside 1..8 is rejected."""
        with pytest.raises(UnsupportedOrderError):
            RPolicy.parse("fixed:9")
