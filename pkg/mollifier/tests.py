import math

import numpy as np
from django.test import SimpleTestCase, override_settings, tag

from chargroup.characters import character_table, principal, quadratic_character
from chargroup.quadruple import Quadruple
from mollifier.bounds import check_gate, factor_D, factor_S, prime_sum_P, trunc_exp, typical_level
from mollifier.coefficients import (
    build_mollifier,
    evaluate_block,
    evaluate_M,
    nu_alpha,
    power_expansion_residual,
    smoothing_a,
    smoothing_a_n,
    smoothing_b,
)
from mollifier.exceptions import CutoffOverflow, MollifierError
from mollifier.holder import boundedness_probe, holder_check
from mollifier.parameters import (
    MollifierSpec,
    block_caps,
    condition_c,
    lambda_residual,
    lambda_sign_changes,
    asymptotic_defaults,
    scaled_defaults,
    solve_lambda,
    synthetic_spec,
)


def random_characters(modulus, count, seed):
    table = character_table(modulus)
    rng = np.random.default_rng(seed)
    return [table[i] for i in rng.choice(len(table), size=count, replace=False)]


class ParameterTests(SimpleTestCase):
    def test_lambda(self):
        lam = solve_lambda()
        self.assertLess(abs(lambda_residual(lam)), 1e-12)
        self.assertAlmostEqual(lam, 0.4912, delta=1e-4)
        self.assertEqual(lambda_sign_changes(), 1)

    def test_condition_c(self):
        self.assertLess(condition_c(6), condition_c(1))
        self.assertLessEqual(condition_c(1), (math.log(2) / 60) ** (4 / 3) / 4)

    def test_block_caps(self):
        self.assertEqual(block_caps(1 / 128), (12, 32))
        self.assertEqual(block_caps(0.5), (0, 0))

    def test_scaled_defaults(self):
        spec = scaled_defaults(101, 6)
        self.assertEqual(spec.K, 1)
        self.assertEqual(spec.interval_primes[0], (2, 3, 5, 7, 11))
        self.assertEqual(spec.interval_primes[1][0], 13)
        self.assertAlmostEqual(spec.beta[1] / spec.beta[0], math.e)
        self.assertEqual(spec.floored, (0, 1))
        self.assertEqual(spec.ell, (2, 2))
        self.assertEqual(spec.as_dict()["mode"], "scaled")

    def test_asymptotic_defaults_pass_the_gate(self):
        for q in (101, 10007):
            spec = asymptotic_defaults(q, 6)
            self.assertAlmostEqual(spec.beta[-1], condition_c(6) / 2)
            self.assertGreater(check_gate(spec), 0)

    def test_invalid_specs(self):
        lam = solve_lambda()
        with self.assertRaises(MollifierError):
            MollifierSpec(100, 2, (0.1,), (2,), (2,), lam)
        with self.assertRaises(MollifierError):
            MollifierSpec(101, 2, (0.2, 0.1), (2, 2), (2, 2), lam)
        with self.assertRaises(MollifierError):
            MollifierSpec(101, 2, (0.1,), (3,), (2,), lam)
        with self.assertRaises(MollifierError):
            MollifierSpec(101, 2, (0.1,), (2,), (2,), 0.5)
        with self.assertRaises(MollifierError):
            MollifierSpec(101, 2, (0.1,), (2,), (2,), lam, mode="other")


class CoefficientTests(SimpleTestCase):
    def setUp(self):
        self.spec = synthetic_spec()

    def test_smoothing_range(self):
        for p in self.spec.interval_primes[0] + self.spec.interval_primes[1]:
            self.assertTrue(0 <= smoothing_a(p, 1, self.spec) <= 1)
        self.assertTrue(0 <= smoothing_b(7, 1, self.spec) <= 1)
        with self.assertRaises(MollifierError):
            smoothing_a(13, 0, self.spec)
        with self.assertRaises(MollifierError):
            smoothing_a(12, 1, self.spec)
        with self.assertRaises(MollifierError):
            smoothing_b(11, 1, self.spec)

    def test_smoothing_vanishes_at_the_edge(self):
        q = 1009
        spec = MollifierSpec(q, 2, (math.log(11) / math.log(q),), (2,), (0,), solve_lambda())
        self.assertAlmostEqual(smoothing_a(11, 0, spec), 0.0, places=12)
        self.assertGreater(smoothing_a(2, 0, spec), 0.5)

    def test_complete_multiplicativity(self):
        a2, a3 = smoothing_a(2, 1, self.spec), smoothing_a(3, 1, self.spec)
        self.assertAlmostEqual(smoothing_a_n(12, 1, self.spec), a2 * a2 * a3, places=14)

    def test_nu_alpha(self):
        self.assertEqual(nu_alpha(49, 2)[0], 0.5)
        self.assertEqual(nu_alpha(1, 5), (1.0, 1))
        for k in (1, 2, 6):
            self.assertEqual(nu_alpha(7, k)[1], -k)
        # 12 = 2 * 6 = 6 * 2
        self.assertEqual(nu_alpha(12, 2)[1], -2)
        self.assertEqual(nu_alpha(6, 2, cap=1)[1], 2)
        self.assertEqual(nu_alpha(8, 2)[1], 0)
        with self.assertRaises(MollifierError):
            nu_alpha(0, 2)

    def test_mollifier_coefficients(self):
        poly = build_mollifier(self.spec)
        coefficients = poly.coefficients
        self.assertEqual(coefficients[1], 1.0)
        for p in (2, 11, 13, 47):
            self.assertAlmostEqual(coefficients[p], -smoothing_a(p, self.spec.K, self.spec), places=14)
        self.assertNotIn(4, coefficients)
        self.assertNotIn(2 * 3 * 5, coefficients)
        self.assertIn(2 * 3 * 13 * 17, coefficients)
        self.assertTrue(np.all(np.diff(poly.support) > 0))
        self.assertTrue(np.all(np.abs(poly.values) <= 1))
        self.assertEqual(len(poly), (1 + 5 + 10) * (1 + 10 + 45))

    def test_block_product(self):
        poly = build_mollifier(self.spec)
        for chi in random_characters(self.spec.q, 3, seed=3):
            whole = evaluate_M(poly, chi, 0.7)
            blocks = evaluate_block(poly, 0, chi, 0.7) * evaluate_block(poly, 1, chi, 0.7)
            self.assertLess(abs(whole - blocks), 1e-10)

    def test_cutoff_overflow(self):
        with self.assertRaises(CutoffOverflow):
            build_mollifier(self.spec, max_terms=100)

    @override_settings(NUMERICS={"MOLLIFIER_MAX_TERMS": 10, "MOLLIFIER_MAX_PRIME": 10_000})
    def test_budget_from_settings(self):
        with self.assertRaises(CutoffOverflow):
            build_mollifier(self.spec)

    def test_power_expansion(self):
        poly = build_mollifier(self.spec)
        t = 0.3
        for j, k in ((0, 3), (1, 2)):
            for chi in random_characters(self.spec.q, 10, seed=j):
                self.assertLess(power_expansion_residual(self.spec, poly, j, k, chi, t), 1e-10)


class BoundTests(SimpleTestCase):
    def setUp(self):
        self.spec = synthetic_spec()

    def test_truncated_exponential(self):
        self.assertEqual(trunc_exp(2, 1.0), 2.5)
        self.assertLess(abs(trunc_exp(40, 1.0) - math.e), 1e-12)
        self.assertEqual(trunc_exp(0, 5.0), 1.0)

    def test_prime_sum(self):
        chi = random_characters(self.spec.q, 1, seed=5)[0]
        expected = sum(
            chi(p) * smoothing_a(p, 1, self.spec) * p ** (-0.5 - 0.2j) for p in self.spec.interval_primes[0]
        )
        self.assertLess(abs(prime_sum_P(chi, self.spec, 0, 1, 0.2) - expected), 1e-12)
        with self.assertRaises(MollifierError):
            prime_sum_P(chi, self.spec, 1, 0)

    def test_factors_are_positive(self):
        for chi in random_characters(self.spec.q, 20, seed=11):
            for j in range(self.spec.K + 1):
                self.assertGreater(factor_D(chi, self.spec, j, 6, 0.5), 0)
                self.assertGreater(factor_S(chi, self.spec, j, 6, 0.5), 0)

    def test_even_truncation_is_positive(self):
        for x in np.linspace(-30, 30, 601):
            for ell in (2, 4, 6):
                self.assertGreater(trunc_exp(ell, x), 0)

    def test_gate(self):
        spec = MollifierSpec(1009, 2, (0.5,), (2,), (0,), solve_lambda(), "asymptotic")
        chi = random_characters(1009, 1, seed=0)[0]
        with self.assertRaises(MollifierError):
            factor_D(chi, spec, 0, 2)
        with self.assertRaises(MollifierError):
            factor_S(chi, spec, 0, 2)

    def test_typical_level(self):
        self.assertEqual(typical_level(principal(self.spec.q), self.spec, 6), 0)
        for chi in random_characters(self.spec.q, 5, seed=2):
            self.assertIn(typical_level(chi, self.spec, 6), range(self.spec.K + 2))


class HolderTests(SimpleTestCase):
    def test_holder_small_q(self):
        quadruple = Quadruple.build(13, (1, 5, 7, 1), t=0.3)
        result = holder_check(quadruple, scaled_defaults(13, 6), workers=1)
        self.assertEqual(result.character_count, 5)
        self.assertEqual(result.nonvanishing, 5)
        self.assertTrue(result.holds)

    def test_spec_for_another_modulus(self):
        quadruple = Quadruple.build(13, (1, 5, 7, 1))
        with self.assertRaises(MollifierError):
            holder_check(quadruple, scaled_defaults(11, 6), workers=1)

    @tag("slow")
    def test_holder_at_q_101(self):
        quadruple = Quadruple.build(101, (1, 5, 7, 11))
        self.assertTrue(holder_check(quadruple).holds)

    @tag("slow")
    def test_boundedness_probe(self):
        psi = quadratic_character(5)
        for k in (2, 4):
            small = boundedness_probe(101, k, psi)
            large = boundedness_probe(211, k, psi)
            self.assertTrue(math.isfinite(small) and math.isfinite(large))
            self.assertLess(max(small, large) / min(small, large), 4)
