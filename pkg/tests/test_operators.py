"""Tests for the fractional operators.

Oracles: the closed-form power rule (gamma ratios through the stdlib where
independence matters), change-of-variables identities, and grid refinement.
"""

import math

import numpy as np
import pytest

from hkfrac.errors import DomainError, ValidationError
from hkfrac.frame import GridFn, make_graded_grid, make_params, weighted_norm
from hkfrac.operators import (
    boundary_coefficient,
    gfd,
    gfi_left,
    gfi_right,
    hk_derivative,
    power_rule_analytic,
    reconstruct,
)
from hkfrac.specfun import gamma_ratio


def rl_power(xi, order, z):
    """Independent power-rule reference via stdlib gammas."""
    return math.gamma(xi) / math.gamma(order + xi) * z ** (order + xi - 1.0)


def hat_values(nodes, j):
    vals = np.zeros_like(nodes)
    vals[j] = 1.0
    return vals


def singular_panel_integral(target, p, q, fn, e, points=80):
    """int_p^q (target-u)^(e-1) fn(u) du by Gauss after s = (target-u)^e.

    The substitution removes the endpoint singularity: the integrand becomes
    fn(target - s^(1/e))/e, smooth since 1/e >= 1.
    """
    s_lo, s_hi = (target - q) ** e, (target - p) ** e
    xs, ws = np.polynomial.legendre.leggauss(points)
    s = 0.5 * (s_hi - s_lo) * xs + 0.5 * (s_hi + s_lo)
    return 0.5 * (s_hi - s_lo) * np.sum(ws * fn(target - s ** (1.0 / e))) / e


class TestWeightMatrices:
    """The product-integration weights against brute-force quadrature."""

    def test_left_weights_integrate_hat_functions(self):
        from hkfrac.operators import _left_weight_matrix, _plain_kernel

        p = make_params(0.6, 0.0, 1.5, 1.0, 2.0)
        g = make_graded_grid(p, 12, 3.0)
        order = 0.6
        W = _left_weight_matrix(g, _plain_kernel(order))
        padded = np.concatenate(([0.0], g.nodes_z))

        def hat(j):
            def fn(u):
                return np.interp(u, padded, hat_values(padded, j))
            return fn

        for i in (0, 3, 11):
            target = g.nodes_z[i]
            for j in range(i + 2):
                expected = 0.0
                for k in range(i + 1):
                    lo, hi = padded[k], padded[k + 1]
                    expected += singular_panel_integral(target, lo, hi, hat(j), order)
                expected /= math.gamma(order)
                assert W[i, j] == pytest.approx(expected, abs=1e-9)

    def test_right_weights_integrate_hat_functions(self):
        from hkfrac.operators import _plain_kernel, _right_weight_matrix

        p = make_params(0.6, 0.0, 1.5, 1.0, 2.0)
        g = make_graded_grid(p, 12, 3.0)
        order = 0.45
        W = _right_weight_matrix(g, _plain_kernel(order))
        nodes = g.nodes_z

        for i in (0, 5, 10):
            for j in range(i, 12):
                def fn(u, j=j):
                    return np.interp(u, nodes, hat_values(nodes, j))
                expected = 0.0
                for k in range(i, 11):
                    lo, hi = nodes[k], nodes[k + 1]
                    # mirror the kernel: distance measured from the target below
                    expected += singular_panel_integral(
                        -nodes[i], -hi, -lo, lambda v, fn=fn: fn(-v), order
                    )
                expected /= math.gamma(order)
                assert W[i, j] == pytest.approx(expected, abs=1e-9)


class TestPowerRuleAnalytic:
    def test_order_zero_is_identity(self):
        p = make_params(0.5, 0.0, 1.5, 1.0, 2.0)
        xs = np.linspace(1.1, 2.0, 7)
        z = np.asarray([1.5**-1 * (x**1.5 - 1.0) for x in xs])
        got = power_rule_analytic(1.7, 0.0, p, xs)
        assert np.allclose(got, z**0.7, rtol=1e-13)

    def test_half_integral_of_one_at_unit(self):
        p = make_params(0.5, 0.0, 1.0, 0.0, 1.0)
        got = power_rule_analytic(1.0, 0.5, p, 1.0)
        assert got == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-13)

    def test_generic_coefficient(self):
        p = make_params(0.3, 0.0, 2.0, 1.0, 3.0)
        x = 2.0
        z = (x**2 - 1.0) / 2.0
        assert power_rule_analytic(1.7, 0.3, p, x) == pytest.approx(rl_power(1.7, 0.3, z), rel=1e-13)

    def test_validation(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        with pytest.raises(ValidationError):
            power_rule_analytic(0.0, 0.5, p, 1.5)
        with pytest.raises(ValidationError):
            power_rule_analytic(1.0, -0.5, p, 1.5)


class TestLeftIntegral:
    def test_zero_in_zero_out(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 32)
        out = gfi_left(GridFn.constant(g, 0.0), 0.7)
        assert np.all(out.values == 0.0)

    def test_order_one_is_plain_integration(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 32)
        out = gfi_left(GridFn.constant(g, 1.0), 1.0)
        assert np.max(np.abs(out.values - (g.nodes_x - 1.0))) <= 1e-14

    def test_half_integral_of_one(self):
        p = make_params(0.5, 0.0, 1.0, 0.0, 1.0)
        g = make_graded_grid(p, 64)
        out = gfi_left(GridFn.constant(g, 1.0), 0.5)
        assert out.values[-1] == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-12)

    def test_analytic_path_keeps_factored_form(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 32)
        out = gfi_left(GridFn.constant(g, 2.0, sigma=0.3), 0.5)
        assert out.sigma == pytest.approx(0.8)
        assert out.is_pure_power

    def test_sigma_carried_power_quadrature(self):
        p = make_params(0.3, 0.0, 2.0, 1.0, 2.0)
        g = make_graded_grid(p, 512, max(1.0, 2.0 / 0.3))
        f = GridFn(g, 0.7, np.ones(g.n))
        num = gfi_left(f, 0.3, method="quadrature").values
        exact = gamma_ratio(1.7, 2.0) * g.nodes_z
        assert np.max(np.abs(num - exact)) / np.max(np.abs(exact)) <= 1e-4

    @pytest.mark.parametrize("alpha,rho,xi", [(0.5, 1.0, 1.7), (0.3, 0.5, 2.5), (0.9, 2.0, 1.7)])
    def test_quadrature_converges_at_order_three_halves(self, alpha, rho, xi):
        p = make_params(alpha, 0.0, rho, 1.0, 2.0)
        errs = []
        for n in (256, 512):
            g = make_graded_grid(p, n, max(1.0, 2.0 / alpha))
            f = GridFn(g, 0.0, g.nodes_z ** (xi - 1.0))
            num = gfi_left(f, alpha, method="quadrature").values
            exact = gamma_ratio(xi, alpha + xi) * g.nodes_z ** (alpha + xi - 1.0)
            errs.append(np.max(np.abs(num - exact)) / np.max(np.abs(exact)))
        assert errs[0] / errs[1] >= 2.0**1.5

    def test_validation(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 16)
        with pytest.raises(ValidationError):
            gfi_left(GridFn.constant(g, 1.0), 0.0)
        with pytest.raises(ValidationError):
            gfi_left(GridFn.constant(g, 1.0, sigma=-1.0), 0.5)
        with pytest.raises(ValidationError):
            gfi_left(GridFn.from_z_function(g, lambda u: u), 0.5, method="analytic")
        with pytest.raises(ValidationError):
            gfi_left(GridFn.constant(g, 1.0), 0.5, method="bogus")


class TestRightIntegral:
    def test_zero(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 32)
        assert np.all(gfi_right(GridFn.constant(g, 0.0), 0.7).values == 0.0)

    def test_order_one_gives_distance_to_b(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 128, 1.0)
        out = gfi_right(GridFn.constant(g, 1.0), 1.0)
        assert np.max(np.abs(out.values - (2.0 - g.nodes_x))) <= 1e-13

    def test_hadamard_mode_order_one(self):
        p = make_params(0.5, 0.0, "hadamard", 1.0, 2.0)
        g = make_graded_grid(p, 128, 1.0)
        out = gfi_right(GridFn.constant(g, 1.0), 1.0)
        expected = math.log(2.0) - g.nodes_z
        assert np.max(np.abs(out.values - expected)) <= 1e-13

    def test_reflection_matches_left_integral(self):
        # rho = 1 on a uniform grid: the reflected nodes are grid nodes again
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 512, 1.0)
        f = GridFn.from_x_function(g, lambda x: np.exp(x))
        right = gfi_right(f, 0.6).values
        reflected = GridFn.from_x_function(g, lambda x: np.exp(3.0 - x))
        left = gfi_left(reflected, 0.6, method="quadrature").values
        got = right[:-1]
        expected = left[::-1][1:]
        assert np.max(np.abs(got - expected)) / np.max(np.abs(got)) <= 1e-3


class TestGeneralizedDerivative:
    def test_zero_rule_is_exact(self):
        for alpha in (0.3, 0.5, 0.8):
            p = make_params(alpha, 0.0, 1.5, 1.0, 2.0)
            g = make_graded_grid(p, 64)
            f = GridFn.constant(g, 1.0, sigma=alpha - 1.0)
            assert np.all(gfd(f, alpha).values == 0.0)

    def test_half_derivative_of_sqrt_is_constant(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 64)
        out = gfd(GridFn.constant(g, 1.0, sigma=0.5), 0.5)
        assert np.allclose(out.values, math.gamma(1.5), rtol=1e-13)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
    def test_left_inverse_of_integral(self, alpha):
        p = make_params(alpha, 0.0, 1.5, 1.0, 2.0)
        g = make_graded_grid(p, 1024)
        smooth = GridFn.from_z_function(g, lambda u: np.exp(u) - 1.0)
        back = gfd(gfi_left(smooth, alpha, method="quadrature"), alpha, method="quadrature")
        w = 1.0 - p.gamma
        assert weighted_norm(back - smooth, w) / weighted_norm(smooth, w) <= 1e-3

    def test_order_validation(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 16)
        with pytest.raises(ValidationError):
            gfd(GridFn.constant(g, 1.0), 1.0)


class TestHKDerivative:
    def test_beta_zero_is_bit_for_bit_gfd(self):
        p = make_params(0.6, 0.0, 2.0, 1.0, 2.0)
        g = make_graded_grid(p, 128)
        f = GridFn.from_z_function(g, lambda u: np.cos(u))
        assert np.array_equal(hk_derivative(f).values, gfd(f, 0.6).values)

    @pytest.mark.parametrize("beta", [0.25, 0.5, 1.0])
    def test_annihilates_the_singular_power(self, beta):
        p = make_params(0.6, beta, 2.0, 1.0, 2.0)
        g = make_graded_grid(p, 64)
        f = GridFn.constant(g, 3.3, sigma=p.gamma - 1.0)
        assert np.all(hk_derivative(f).values == 0.0)

    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0])
    def test_left_inverse_of_integral(self, beta):
        p = make_params(0.5, beta, 1.5, 1.0, 2.0)
        g = make_graded_grid(p, 1024)
        smooth = GridFn.from_z_function(g, lambda u: u)
        back = hk_derivative(gfi_left(smooth, 0.5))
        w = 1.0 - p.gamma
        assert weighted_norm(back - smooth, w) / weighted_norm(smooth, w) <= 1e-3


class TestSemigroup:
    @pytest.mark.parametrize("orders", [(0.3, 0.7), (0.4, 0.4)])
    def test_composition_matches_single_integral(self, orders):
        a, b = orders
        p = make_params(0.4, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 1024, max(1.0, 2.0 / min(a, b)))
        for fn in (lambda u: np.ones_like(u), lambda u: u, lambda u: np.exp(u) - 1.0):
            f = GridFn.from_z_function(g, fn)
            lhs = gfi_left(gfi_left(f, b, method="quadrature"), a, method="quadrature")
            rhs = gfi_left(f, a + b, method="quadrature")
            assert weighted_norm(lhs - rhs, 0.0) / weighted_norm(rhs, 0.0) <= 5e-4


class TestBoundaryBehavior:
    def test_first_node_vanishing_respects_the_analytic_bound(self):
        # f = z^(-gw) with gw < alpha: J^alpha f is continuous with value 0 at a
        alpha, gw = 0.7, 0.3
        p = make_params(alpha, 0.0, 1.0, 1.0, 2.0)
        previous = None
        for n in (128, 256, 512):
            g = make_graded_grid(p, n)
            f = GridFn.constant(g, 1.0, sigma=-gw)
            first = abs(gfi_left(f, alpha, method="quadrature").values[0])
            bound = gamma_ratio(1.0 - gw, alpha - gw + 1.0) * g.nodes_z[0] ** (alpha - gw)
            assert first <= bound * 1.05
            if previous is not None:
                assert first < previous
            previous = first


class TestReconstruct:
    @pytest.mark.parametrize("alpha", [0.3, 0.6, 0.8])
    def test_smooth_function_reconstructs(self, alpha):
        p = make_params(alpha, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 1024)
        f = GridFn.from_z_function(g, lambda u: 1.0 + u**2)
        part, coeff = reconstruct(f, alpha)
        assert coeff == 0.0
        w = 1.0 - alpha
        assert weighted_norm(part - f, w) / weighted_norm(f, w) <= 2e-3

    def test_pure_power_boundary_term(self):
        alpha = 0.6
        p = make_params(alpha, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 64)
        f = GridFn.constant(g, 1.0, sigma=alpha - 1.0)
        part, coeff = reconstruct(f, alpha)
        assert np.all(part.values == 0.0)
        assert coeff == pytest.approx(math.gamma(alpha), rel=1e-13)
        # the identity J^a D^a f = f - coeff/Gamma(a) z^(a-1) closes exactly
        correction = coeff / math.gamma(alpha) * g.nodes_z ** (alpha - 1.0)
        assert np.allclose(part.values, f.values - correction, rtol=0, atol=1e-12)

    def test_zero_function(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 64)
        part, coeff = reconstruct(GridFn.constant(g, 0.0), 0.5)
        assert np.all(part.values == 0.0) and coeff == 0.0

    def test_boundary_coefficient_divergence(self):
        p = make_params(0.5, 0.0, 1.0, 1.0, 2.0)
        g = make_graded_grid(p, 64)
        with pytest.raises(DomainError):
            boundary_coefficient(GridFn.constant(g, 1.0, sigma=-0.9), 0.5)
