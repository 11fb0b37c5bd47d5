import math

import mpmath
import numpy as np
from django.test import SimpleTestCase
from scipy.optimize import brentq

from special.bessel import bessel
from special.exceptions import PoleError, SpecialFunctionError
from special.gamma import log_gamma
from special.quadrature import BumpFunction, integrate, panel_rule
from special.weights import WeightV, gamma_factor


def reduce_mod_2pi_i(z):
    return z - 2j * math.pi * round(z.imag / (2 * math.pi))


def contour_weight(x, t=0.0, sigma=0.5):
    """V(x; t) by mpmath quadrature on Re(s) = sigma."""
    with mpmath.workdps(30):
        a = mpmath.mpc(0.5, t) / 2
        b = mpmath.mpc(0.5, -t) / 2

        def integrand(tau):
            s = mpmath.mpc(sigma, tau)
            g = (mpmath.gamma(a + s / 2) / mpmath.gamma(a)) ** 2 * (mpmath.gamma(b + s / 2) / mpmath.gamma(b)) ** 2
            return mpmath.exp(s**2) * g * mpmath.mpf(x) ** (-s) / s

        return complex(mpmath.quad(integrand, mpmath.linspace(-12, 12, 49)) / (2 * mpmath.pi))


class LogGammaTests(SimpleTestCase):
    def test_special_values(self):
        self.assertAlmostEqual(log_gamma(1), 0, delta=1e-15)
        self.assertAlmostEqual(log_gamma(0.5), math.log(math.sqrt(math.pi)), delta=1e-14)

    def test_recurrence(self):
        for z in (2 + 3j, 0.3 - 7j, 12.5 + 0.1j, -2.5 + 1j):
            residual = reduce_mod_2pi_i(log_gamma(z + 1) - log_gamma(z) - np.log(z))
            self.assertLess(abs(residual), 1e-12)

    def test_duplication(self):
        for z in (0.25 + 0.5j, 3 - 2j):
            lhs = log_gamma(z) + log_gamma(z + 0.5)
            rhs = (1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z)
            self.assertLess(abs(reduce_mod_2pi_i(lhs - rhs)), 1e-12)

    def test_poles(self):
        for z in (0, -3):
            with self.assertRaises(PoleError):
                log_gamma(z)


class BesselTests(SimpleTestCase):
    def test_small_argument(self):
        self.assertAlmostEqual(bessel("J0", 1e-8), 1.0, delta=1e-12)

    def test_first_zero(self):
        zero = brentq(lambda x: bessel("J0", x), 2.0, 3.0, xtol=1e-14)
        self.assertAlmostEqual(zero, 2.404825558, delta=1e-9)

    def test_wronskian(self):
        h = 1e-3

        def derivative(kind, x):
            f = lambda u: bessel(kind, u)
            return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)

        for x in (0.5, 5.0, 50.0):
            w = bessel("J0", x) * derivative("Y0", x) - derivative("J0", x) * bessel("Y0", x)
            self.assertAlmostEqual(w, 2 / (math.pi * x), delta=1e-9)

    def test_k0_integral_representation(self):
        for x in np.exp(np.linspace(math.log(1e-3), math.log(10.0), 12)):
            value, _ = integrate(
                lambda u: math.exp(-x * np.cosh(u)), (0.0, math.inf), tolerance=0.0, relative=1e-11
            )
            self.assertAlmostEqual(value / bessel("K0", x), 1.0, delta=1e-9)

    def test_rejects_bad_input(self):
        with self.assertRaises(SpecialFunctionError):
            bessel("J0", 0.0)
        with self.assertRaises(SpecialFunctionError):
            bessel("J1", 1.0)


class QuadratureTests(SimpleTestCase):
    def test_linear(self):
        value, _ = integrate(lambda x: x, (0.0, 1.0))
        self.assertAlmostEqual(value, 0.5, delta=1e-12)

    def test_k0_total_mass(self):
        value, _ = integrate(lambda x: bessel("K0", x), (0.0, math.inf), tolerance=1e-10)
        self.assertAlmostEqual(value, math.pi / 2, delta=1e-8)

    def test_half_line(self):
        value, _ = integrate(lambda x: math.exp(-x), (0.0, math.inf), tolerance=1e-12)
        self.assertAlmostEqual(value, 1.0, delta=1e-10)
        value, _ = integrate(lambda x: np.exp((-1 + 1j) * x), (2.0, math.inf), tolerance=1e-12)
        self.assertAlmostEqual(value, np.exp((-1 + 1j) * 2.0) / (1 - 1j), delta=1e-10)

    def test_lower_half_line_below_one(self):
        # the integrand is undefined for x > 0
        value, _ = integrate(lambda x: math.sqrt(-x) * math.exp(x), (-math.inf, 0.0), tolerance=1e-10)
        self.assertAlmostEqual(value, math.sqrt(math.pi) / 2, delta=1e-8)

    def test_complex_integrand(self):
        value, _ = integrate(lambda x: np.exp(1j * x), (0.0, 1.0))
        self.assertAlmostEqual(value, (np.exp(1j) - 1) / 1j, delta=1e-12)

    def test_panel_rule_is_exact_on_polynomials(self):
        nodes, weights = panel_rule(2.0, 5.0, panels=8, order=6)
        self.assertAlmostEqual(weights.sum(), 3.0, delta=1e-13)
        self.assertAlmostEqual(np.dot(weights, nodes**7), (5.0**8 - 2.0**8) / 8, delta=1e-7)


class BumpFunctionTests(SimpleTestCase):
    def test_shape(self):
        g = BumpFunction((10.0, 20.0))
        self.assertEqual(g(9.5), 0.0)
        self.assertEqual(g(20.0), 0.0)
        self.assertAlmostEqual(g(15.0), 1.0, delta=1e-15)
        values = g(np.linspace(0, 30, 3001))
        self.assertTrue(np.all((values >= 0) & (values <= 1)))

    def test_integral_bounds(self):
        g = BumpFunction((10.0, 20.0))
        self.assertGreater(g.integral, 0.0)
        self.assertLess(g.integral, 10.0)
        value, _ = integrate(g, (10.0, 20.0), tolerance=1e-10)
        self.assertAlmostEqual(g.integral, value, delta=1e-9)

    def test_derivative_table(self):
        bounds = BumpFunction((1.0, 3.0)).derivative_bounds
        self.assertEqual(sorted(bounds), [0, 1, 2, 3, 4])
        self.assertAlmostEqual(bounds[0], 1.0, delta=1e-6)
        self.assertTrue(all(math.isfinite(v) for v in bounds.values()))

    def test_bad_support(self):
        with self.assertRaises(SpecialFunctionError):
            BumpFunction((0.0, 1.0))


class WeightVTests(SimpleTestCase):
    def test_gamma_factor(self):
        for t in (0.0, 1.0, 5.0):
            self.assertEqual(gamma_factor(0.0, t), 1.0)
            for s in (0.3 + 2j, 1.5 - 0.5j):
                self.assertEqual(gamma_factor(s, t), gamma_factor(s, -t))

    def test_small_x_limit(self):
        weight = WeightV(t=0.0, sigma=0.05, x_floor=1e-32)
        self.assertAlmostEqual(weight(1e-30), 1.0, delta=1e-6)

    def test_small_x_against_contour_integral(self):
        # 1 - V decays like x^(1/2) log^3 x from the pole of g at s = -1/2
        for x in (1e-6, 1e-3, 0.1, 1.0, 10.0):
            self.assertAlmostEqual(WeightV(t=0.0)(x), contour_weight(x), delta=1e-9)
        self.assertAlmostEqual(WeightV(t=0.0)(1e-6).real, 0.8859539336, delta=1e-8)

    def test_large_x(self):
        self.assertLess(abs(WeightV(t=0.0)(1e6)), 1e-6)

    def test_contour_independence(self):
        self.assertAlmostEqual(WeightV(sigma=1.0)(1.0), WeightV(sigma=2.0)(1.0), delta=1e-8)
        x = np.array([0.05, 0.7, 3.0, 40.0])
        for t in (0.0, 2.5):
            first = WeightV(t=t, sigma=0.5)(x)
            second = WeightV(t=t, sigma=1.0)(x)
            self.assertLess(np.max(np.abs(first - second)), 1e-11)

    def test_real_at_zero_shift(self):
        values = WeightV(t=0.0)(np.array([0.1, 1.0, 10.0]))
        self.assertLess(np.max(np.abs(values.imag)), 1e-14)

    def test_decay_envelope(self):
        x = np.exp(np.linspace(0.0, math.log(1e4), 200))
        for t in (0.0, 1.0, 5.0):
            envelope = np.abs(WeightV(t=t)(x)) * (1 + x / (1 + abs(t)) ** 2) ** 3
            self.assertTrue(np.all(np.isfinite(envelope)))
            self.assertLess(envelope.max(), 1e3)

    def test_cutoff(self):
        weight = WeightV(t=0.5)
        x0 = weight.cutoff(1e-13)
        self.assertGreater(x0, 1.0)
        self.assertLess(abs(weight(x0)), 1e-13)
        self.assertLess(np.max(np.abs(weight(x0 * np.array([1.5, 3.0, 10.0])))), 1e-13)

    def test_table_matches_direct_quadrature(self):
        weight = WeightV(t=0.5)
        table = weight.table(0.05, 1e5)
        x = np.exp(np.random.default_rng(2).uniform(math.log(0.05), math.log(1e5), 300))
        self.assertLess(np.max(np.abs(table(x) - weight(x))), 5e-12)
