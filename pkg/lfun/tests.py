import math

import mpmath
import numpy as np
from django.test import SimpleTestCase, tag

from chargroup.characters import character_table, even_primitive_characters, quadratic_character, trivial
from chargroup.quadruple import Quadruple
from lfun.afe import afe_expansion, afe_product_value, direct_product, hyperbola_pair_sum
from lfun.exceptions import LFunctionError, TruncationBudgetExceeded
from lfun.grh import grh_log_bound_gap, log_bound_lambda, log_bound_rhs
from lfun.hurwitz import hurwitz_zeta
from lfun.lvalues import completed_lambda, euler_lvalue, fe_residual, l_value, lvalue


def periodic_values(chi):
    return [complex(chi(n)) for n in range(chi.modulus)]


class HurwitzZetaTests(SimpleTestCase):
    def test_special_values(self):
        self.assertAlmostEqual(hurwitz_zeta(2, 1), math.pi**2 / 6, delta=1e-12)
        self.assertAlmostEqual(hurwitz_zeta(2, 0.5), math.pi**2 / 2, delta=1e-10)
        for a in (0.1, 0.5, 1.0):
            self.assertAlmostEqual(hurwitz_zeta(0, a), 0.5 - a, delta=1e-12)

    def test_matches_mpmath(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            s = complex(rng.uniform(-2, 6), rng.uniform(-20, 20))
            a = float(rng.uniform(0.01, 1.0))
            expected = complex(mpmath.zeta(s, a))
            self.assertLess(abs(hurwitz_zeta(s, a) - expected), 1e-10 * max(1.0, abs(expected)))

    def test_vectorised(self):
        shifts = np.array([0.2, 0.7, 1.0])
        values = hurwitz_zeta(0.5 + 3j, shifts)
        for a, value in zip(shifts, values):
            self.assertAlmostEqual(value, hurwitz_zeta(0.5 + 3j, a), delta=1e-14)

    def test_pole(self):
        with self.assertRaises(LFunctionError):
            hurwitz_zeta(1, 0.5)


class LValueTests(SimpleTestCase):
    def test_zeta_two(self):
        result = lvalue(trivial(), 2)
        self.assertAlmostEqual(result.value, math.pi**2 / 6, delta=1e-12)
        self.assertEqual(result.method, "hurwitz")
        self.assertGreater(result.error, 0)

    def test_class_number_value(self):
        golden = (1 + math.sqrt(5)) / 2
        self.assertAlmostEqual(
            l_value(quadratic_character(5), 1), 2 / math.sqrt(5) * math.log(golden), delta=1e-12
        )

    def test_central_value_mod_five(self):
        chi = even_primitive_characters(5)[0]
        expected = complex(mpmath.dirichlet(0.5, periodic_values(chi)))
        self.assertAlmostEqual(l_value(chi, 0.5), expected, delta=1e-10)

    def test_mixed_moduli_against_mpmath(self):
        for m in (7, 12, 35, 101):
            for chi in character_table(m)[1:4]:
                s = 0.5 + 2.5j
                expected = complex(mpmath.dirichlet(s, periodic_values(chi)))
                self.assertAlmostEqual(l_value(chi, s), expected, delta=1e-9)

    def test_principal_pole(self):
        with self.assertRaises(LFunctionError):
            lvalue(trivial(), 1)

    def test_euler_product_within_tail_bound(self):
        for m in (5, 12, 29, 50):
            for chi in character_table(m)[:6]:
                euler = euler_lvalue(chi, 2)
                self.assertLess(abs(euler.value - l_value(chi, 2)), euler.error)

    def test_long_euler_product(self):
        for m in (5, 13, 44):
            for chi in character_table(m)[1:4]:
                euler = euler_lvalue(chi, 2, prime_cutoff=10**6)
                self.assertAlmostEqual(euler.value, l_value(chi, 2), delta=1e-7)

    def test_euler_product_needs_absolute_convergence(self):
        with self.assertRaises(LFunctionError):
            euler_lvalue(trivial(), 0.5)


class FunctionalEquationTests(SimpleTestCase):
    def test_examples(self):
        self.assertLess(fe_residual(even_primitive_characters(5)[0], 0.3), 1e-9)
        self.assertLess(fe_residual(even_primitive_characters(13)[0], 0.3 + 0.7j), 1e-9)

    def test_central_point_conjugation(self):
        chi = even_primitive_characters(13)[1]
        self.assertAlmostEqual(
            completed_lambda(chi.conj(), 0), completed_lambda(chi, 0).conjugate(), delta=1e-12
        )

    def test_random_characters(self):
        pool = [chi for m in range(5, 101) for chi in even_primitive_characters(m)]
        rng = np.random.default_rng(31)
        grid = (0.0, 0.3, -0.4 + 1j, 0.25 - 2j, 1.1 + 0.5j)
        for index in rng.choice(len(pool), size=20, replace=False):
            for s in grid:
                self.assertLess(fe_residual(pool[index], s), 1e-9)

    def test_rejects_odd_character(self):
        odd = [chi for chi in character_table(5) if not chi.is_even][0]
        with self.assertRaises(LFunctionError):
            fe_residual(odd, 0.3)


class ApproximateFunctionalEquationTests(SimpleTestCase):
    def test_pair_sum_matches_double_loop(self):
        rng = np.random.default_rng(4)
        size = 60
        a, b, w = (rng.normal(size=size + 1) + 1j * rng.normal(size=size + 1) for _ in range(3))
        expected = sum(a[m] * b[n] * w[m * n] for m in range(1, size + 1) for n in range(1, size // m + 1))
        self.assertAlmostEqual(hyperbola_pair_sum(a, b, w), expected, delta=1e-10)

    def test_trivial_moduli(self):
        for q in (11, 13, 17):
            quadruple = Quadruple.build(q, (1, 1, 1, 1))
            for chi in even_primitive_characters(q):
                self.assertAlmostEqual(
                    afe_product_value(quadruple, chi), direct_product(quadruple, chi), delta=1e-8
                )

    def test_conjugation(self):
        quadruple = Quadruple.build(11, (1, 5, 1, 1), t=0.5)
        swapped = Quadruple(11, (1, 1, 1, 5), quadruple.chars[2:] + quadruple.chars[:2], t=0.5)
        for chi in even_primitive_characters(11):
            self.assertAlmostEqual(
                afe_product_value(swapped, chi),
                afe_product_value(quadruple, chi).conjugate(),
                delta=1e-9,
            )

    def test_budget(self):
        quadruple = Quadruple.build(13, (1, 1, 1, 1))
        with self.assertRaises(TruncationBudgetExceeded):
            afe_expansion(quadruple, even_primitive_characters(13)[0], max_terms=1000)

    def test_rejects_foreign_character(self):
        quadruple = Quadruple.build(13, (1, 1, 1, 1))
        with self.assertRaises(LFunctionError):
            afe_product_value(quadruple, even_primitive_characters(5)[0])

    @tag("slow")
    def test_twisted_moduli(self):
        quadruple = Quadruple.build(11, (1, 5, 7, 1), t=0.5)
        self.assertEqual(quadruple.chars[2].order, 3)
        for chi in even_primitive_characters(11):
            expansion = afe_expansion(quadruple, chi)
            self.assertAlmostEqual(abs(expansion.root), 1.0, delta=1e-12)
            self.assertAlmostEqual(expansion.value, direct_product(quadruple, chi), delta=1e-7)

    @tag("slow")
    def test_twisted_moduli_q17(self):
        quadruple = Quadruple.build(17, (1, 5, 7, 1))
        chi = even_primitive_characters(17)[0]
        self.assertAlmostEqual(
            afe_product_value(quadruple, chi), direct_product(quadruple, chi), delta=1e-7
        )


class LogBoundTests(SimpleTestCase):
    def test_lambda(self):
        lam = log_bound_lambda()
        self.assertAlmostEqual(lam, 0.4912, delta=1e-4)
        self.assertAlmostEqual(math.exp(-lam), lam + lam * lam / 2, delta=1e-14)

    def test_gap_examples(self):
        self.assertGreaterEqual(grh_log_bound_gap(even_primitive_characters(5)[0], 0.0, 1e3), -0.1)
        self.assertGreaterEqual(grh_log_bound_gap(even_primitive_characters(13)[0], 1.0, 1e4), -0.1)

    def test_envelope(self):
        chi = even_primitive_characters(13)[0]
        self.assertLessEqual(log_bound_rhs(chi, 0.0, 1e4), log_bound_rhs(chi, 0.0, 1e2) + 2)

    def test_requires_primitive(self):
        with self.assertRaises(LFunctionError):
            grh_log_bound_gap(quadratic_character(5).induce(10), 0.0, 100)
