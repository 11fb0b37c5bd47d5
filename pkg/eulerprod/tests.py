import math
from math import gcd

import numpy as np
from django.test import SimpleTestCase, tag

from chargroup.characters import even_primitive_characters, quadratic_character, trivial
from eulerprod import local_factors as lf
from eulerprod.cfactors import (
    LocalFactorContext,
    cplus,
    fuzz_identity,
    fuzz_second_identity,
    random_configuration,
    split_by_support,
    verify_identity,
    verify_second_identity,
)
from eulerprod.cyclotomic import analytic_floor, character_values_at, cyclotomic_scan, small_prime_scan, up_factor
from eulerprod.exceptions import DegenerateLocalFactor, EulerProductError
from eulerprod.products import (
    diagonal_envelope,
    diagonal_series,
    factor_F,
    factor_H,
    product_A,
)
from lfun.lvalues import l_value

TRIVIAL_CHARS = (trivial(), trivial(), trivial(), trivial())


def unit_values(rng, count=4, order=12):
    return tuple(np.exp(2j * np.pi * int(rng.integers(order)) / order) for _ in range(count))


def close(test, first, second, tolerance):
    test.assertLess(abs(first - second), tolerance * max(1.0, abs(first), abs(second)))


class LocalFactorTests(SimpleTestCase):
    def test_closed_forms_match_finite_forms(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            p = int(rng.choice([2, 3, 5, 7, 11]))
            values = unit_values(rng)
            s = complex(rng.uniform(-1, 1), rng.uniform(-3, 3))
            b = int(rng.integers(1, 5))
            close(self, lf.c_plus_closed(p, values, s, b), lf.c_plus(p, values, s, b), 1e-10)
            close(self, lf.e_plus_closed(p, values, s, b), lf.e_plus(p, values, s, b), 1e-10)
            close(self, lf.f_plus_closed(p, values, s, b), lf.f_plus(p, values, s, b), 1e-10)

    def test_degenerate_closed_form(self):
        values = (1, 1, 1, 1)
        with self.assertRaises(DegenerateLocalFactor):
            lf.e_plus_closed(3, values, 0, 2)
        self.assertTrue(math.isfinite(abs(lf.e_plus(3, values, 0, 2))))

    def test_trivial_values(self):
        p, X = 5, 1 / 5
        self.assertAlmostEqual(lf.e_plus(p, (1, 1, 1, 1), 0, 1) / (1 - X * X), 2 / (1 + X), delta=1e-14)

    def test_series_at_b3(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            p = int(rng.choice([2, 3, 5, 7]))
            values = unit_values(rng)
            s = complex(0.3, rng.uniform(-2, 2))
            b3 = int(rng.integers(1, 4))
            close(self, lf.b3_series(p, values, s, b3), lf.local_E(p, values, s, b3), 1e-11)
            values = values[:3] + (0,)
            close(self, lf.b3_series(p, values, s, b3), lf.local_F(p, values, s, b3), 1e-11)

    def test_series_at_d1(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            p = int(rng.choice([5, 7, 11]))
            values = (0,) + unit_values(rng, 3)
            s = complex(rng.uniform(-0.5, 0.5), rng.uniform(-2, 2))
            a1 = int(rng.integers(1, 4))
            b3 = int(rng.integers(1, 4))
            close(self, lf.d1_series(p, values, s, a1, 0), lf.local_B(p, values, s, a1), 1e-11)
            close(self, lf.d1_series(p, values, s, 0, b3), lf.local_C(p, values, s, b3), 1e-11)
            close(self, lf.d1_series(p, values, s, 0, 0), lf.local_D(p, values, s), 1e-11)

    def test_plus_minus_pairings(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            p = int(rng.choice([2, 3, 5, 7, 13]))
            s = complex(rng.uniform(-0.5, 0.5), rng.uniform(-2, 2))
            b = int(rng.integers(1, 4))
            a, chi2, chi3, chi4 = unit_values(rng)
            ps = lambda e: complex(p) ** e

            values = (0, chi2, chi3, chi4)
            rhs = lf.f_minus(p, values, -2 * s, b) * chi2**b * np.conj(chi3) ** (1 + b) * ps(1 - 2 * b * s)
            close(self, lf.c_plus(p, values, 2 * s, b + 1), rhs, 1e-10)

            values = (a, chi2, chi3, chi4)
            rhs = lf.e_minus(p, values, -2 * s, b) * (chi2 * np.conj(chi3)) ** b * ps(-2 * b * s)
            close(self, lf.e_plus(p, values, 2 * s, b), rhs, 1e-10)

            values = (a, chi2, chi3, 0)
            rhs = lf.c_minus(p, values, -2 * s, 1 + b) * chi2 ** (1 + b) * np.conj(chi3) ** b * ps(-1 - 2 * b * s)
            close(self, lf.f_plus(p, values, 2 * s, b), rhs, 1e-10)

    def test_mirrored_series(self):
        rng = np.random.default_rng(15)
        for _ in range(50):
            p = int(rng.choice([5, 7, 11]))
            a, chi2, chi4 = unit_values(rng, 3)
            s = complex(rng.uniform(-0.5, 0.5), rng.uniform(-2, 2))
            k = int(rng.integers(1, 4))
            values = (a, chi2, 0, chi4)
            mirrored = lf.mirror(values)
            close(self, lf.d1_series(p, mirrored, s, k, 0), lf.local_G(p, values, s, k), 1e-11)
            close(self, lf.d1_series(p, mirrored, s, 0, k), lf.local_H(p, values, s, k), 1e-11)
            close(self, lf.d1_series(p, mirrored, s, 0, 0), lf.local_I(p, values, s), 1e-11)

            values = unit_values(rng)
            s = complex(0.3, rng.uniform(-2, 2))
            close(self, lf.b3_series(p, lf.mirror(values), s, k), lf.local_J(p, values, s, k), 1e-11)
            values = (values[0], 0) + values[2:]
            close(self, lf.b3_series(p, lf.mirror(values), s, k), lf.local_K(p, values, s, k), 1e-11)

    def test_generic_factor(self):
        rng = np.random.default_rng(16)
        for _ in range(50):
            p = int(rng.choice([2, 3, 5, 7, 13]))
            values = unit_values(rng)
            s = complex(0.3, rng.uniform(-2, 2))
            close(self, lf.b3_series(p, values, s, 0), lf.local_A(p, values, s), 1e-11)
            close(self, lf.local_E(p, values, s, 0), lf.local_A(p, values, s), 1e-12)
            expected = (1 - lf.psi_value(values) / p**2) / (1 - values[1] * np.conj(values[3]) / p ** (1 + s))
            close(self, lf.local_A(p, values, s), expected, 1e-14)

    def test_mirrored_plus_minus_pairings(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            p = int(rng.choice([2, 3, 5, 7, 13]))
            s = complex(rng.uniform(-0.5, 0.5), rng.uniform(-2, 2))
            b = int(rng.integers(1, 4))
            a, chi2, chi3, chi4 = unit_values(rng)
            ps = lambda e: complex(p) ** e

            values = (a, chi2, 0, chi4)
            rhs = lf.k_minus(p, values, -2 * s, b) * np.conj(chi4) ** b * a ** (1 + b) * ps(1 - 2 * b * s)
            close(self, lf.h_plus(p, values, 2 * s, b + 1), rhs, 1e-10)

            values = (a, chi2, chi3, chi4)
            rhs = lf.j_minus(p, values, -2 * s, b) * (np.conj(chi4) * a) ** b * ps(-2 * b * s)
            close(self, lf.j_plus(p, values, 2 * s, b), rhs, 1e-10)

            values = (a, 0, chi3, chi4)
            rhs = lf.h_minus(p, values, -2 * s, 1 + b) * np.conj(chi4) ** (1 + b) * a**b * ps(-1 - 2 * b * s)
            close(self, lf.k_plus(p, values, 2 * s, b), rhs, 1e-10)

    def test_mirror_and_swap_are_involutions(self):
        values = unit_values(np.random.default_rng(1))
        self.assertEqual(lf.swap(lf.swap(values)), values)
        for first, second in zip(lf.mirror(lf.mirror(values)), values):
            self.assertAlmostEqual(first, second, delta=1e-15)

    def test_mirrored_factors(self):
        values = unit_values(np.random.default_rng(2))
        self.assertEqual(lf.h_plus(3, values, 0.2, 2), lf.c_plus(3, lf.mirror(values), 0.2, 2))
        self.assertEqual(lf.local_I(3, values, 0.2), lf.local_D(3, lf.mirror(values), 0.2))


class ProductTests(SimpleTestCase):
    def test_empty_F(self):
        self.assertEqual(factor_F(1, 1, 2, TRIVIAL_CHARS), 1)

    def test_F_at_two(self):
        self.assertAlmostEqual(factor_F(2, 1, 2, TRIVIAL_CHARS), 2 / (1 + 1 / 4), delta=1e-12)
        terms = 10**5
        lhs = diagonal_series(TRIVIAL_CHARS, 2, 1, 2, terms)
        rhs = 1.6 * diagonal_series(TRIVIAL_CHARS, 1, 1, 2, terms)
        bound = diagonal_envelope(2, 1, 2, terms) + 1.6 * diagonal_envelope(1, 1, 2, terms)
        self.assertLess(abs(lhs - rhs), bound)

    def test_H_for_trivial_characters(self):
        value = factor_H(2, TRIVIAL_CHARS)
        self.assertLess(abs(value.value - 90 / math.pi**4), value.tail_bound + 1e-13)
        completed = factor_H(2, TRIVIAL_CHARS, complete_tail=True)
        self.assertAlmostEqual(completed.value, 90 / math.pi**4, delta=1e-12)

    def test_H_local_deviation_envelope(self):
        chars = (trivial(), quadratic_character(5), even_primitive_characters(7)[0], trivial())
        value = factor_H(2, chars).value
        zeta4, zeta8 = math.pi**4 / 90, math.pi**8 / 9450
        self.assertLessEqual(abs(value - 1), zeta4 / zeta8 - 1 + 1e-12)

    def test_H_against_diagonal_quotient(self):
        chars = (trivial(), quadratic_character(5), even_primitive_characters(7)[0], trivial())
        terms = 10**5
        l_product = 1
        for left in chars[:2]:
            for right in chars[2:]:
                l_product *= l_value(left * right.conj(), 2)
        quotient = diagonal_series(chars, 1, 1, 2, terms) / l_product
        bound = diagonal_envelope(1, 1, 2, terms) / abs(l_product)
        self.assertLess(abs(factor_H(2, chars, complete_tail=True).value - quotient), bound)

    def test_diagonal_factorisation(self):
        rng = np.random.default_rng(21)
        terms = 20000
        done = 0
        while done < 20:
            chars, ell1, ell2 = random_configuration(rng, max_twist=6)
            if gcd(ell1, ell2) != 1:
                continue
            l_product = 1
            for left in chars[:2]:
                for right in chars[2:]:
                    l_product *= l_value(left * right.conj(), 2)
            predicted = (
                factor_F(ell1, ell2, 2, chars)
                * factor_H(2, chars, complete_tail=True).value
                * l_product
            )
            series = diagonal_series(chars, ell1, ell2, 2, terms)
            self.assertLess(abs(series - predicted), diagonal_envelope(ell1, ell2, 2, terms) + 1e-9)
            done += 1

    def test_completion_within_tail_bound(self):
        chars = (trivial(), quadratic_character(5), even_primitive_characters(7)[1], trivial())
        truncated = factor_H(1, chars, prime_cutoff=5000)
        completed = factor_H(1, chars, prime_cutoff=5000, complete_tail=True)
        self.assertLess(abs(truncated.value - completed.value), truncated.tail_bound)
        self.assertGreater(truncated.tail_bound, factor_H(1, chars, prime_cutoff=20000).tail_bound)

    def test_A_examples(self):
        chars = (quadratic_character(5), trivial(), trivial(), even_primitive_characters(7)[0])
        self.assertAlmostEqual(
            product_A(chars, 1, 1), factor_H(1, chars, complete_tail=True).value, delta=1e-14
        )
        swapped = (chars[1], chars[0], chars[3], chars[2])
        for ell in ((1, 1), (2, 3), (5, 4)):
            self.assertAlmostEqual(product_A(chars, *ell), product_A(swapped, *ell), delta=1e-12)

    def test_bad_arguments(self):
        with self.assertRaises(EulerProductError):
            factor_H(0.5, TRIVIAL_CHARS)
        with self.assertRaises(EulerProductError):
            factor_F(2, 1, 0, TRIVIAL_CHARS)
        with self.assertRaises(EulerProductError):
            factor_F(2, 4, 1, TRIVIAL_CHARS)


class CFactorTests(SimpleTestCase):
    def test_split(self):
        self.assertEqual(split_by_support(360, 6), (72, 5))
        self.assertEqual(split_by_support(7, 1), (1, 7))

    def test_empty_products(self):
        chars = (quadratic_character(5), trivial(), even_primitive_characters(7)[0], trivial())
        context = LocalFactorContext(chars, (1, 1))
        psi = chars[0].conj() * chars[3].conj() * chars[1] * chars[2]
        expected = np.conj(chars[3](5)) * chars[1](7) / l_value(psi, 2)
        self.assertAlmostEqual(cplus(0.3, context), expected, delta=1e-13)

    def test_swap_is_an_involution(self):
        chars = (quadratic_character(5), trivial(), even_primitive_characters(7)[0], trivial())
        context = LocalFactorContext(chars, (6, 35))
        twice = context.swapped((6, 35)).swapped((6, 35))
        self.assertEqual(twice.chars, context.chars)
        self.assertEqual(cplus(0.2j, twice), cplus(0.2j, context))

    def test_identity_without_moduli(self):
        for ell in ((1, 1), (6, 35), (12, 18), (8, 1)):
            for s in (0.1, 0.3j, -0.25 + 0.1j):
                self.assertLess(verify_identity(TRIVIAL_CHARS, *ell, s).residual, 1e-12)

    def test_residual_is_relative(self):
        rng = np.random.default_rng(18)
        chars, ell1, ell2 = random_configuration(rng)
        for record in (verify_identity(chars, ell1, ell2, -0.4), verify_second_identity(chars, ell1, ell2)):
            scale = max(1.0, abs(record.lhs), abs(record.rhs))
            self.assertAlmostEqual(record.residual, abs(record.lhs - record.rhs) / scale, delta=1e-20)
            self.assertLess(abs(record.lhs - record.rhs), 1e-9 * scale)

    def test_identity_fuzz(self):
        records = fuzz_identity(100, seed=7)
        self.assertEqual(len(records), 500)
        self.assertLess(max(record.residual for record in records), 1e-10)

    def test_second_identity_examples(self):
        chars = (trivial(), quadratic_character(5), trivial(), quadratic_character(13))
        self.assertLess(verify_second_identity(chars, 1, 1).residual, 1e-12)
        rng = np.random.default_rng(3)
        for _ in range(5):
            chars = (
                even_primitive_characters(5)[0],
                trivial(),
                even_primitive_characters(7)[int(rng.integers(2))],
                trivial(),
            )
            self.assertLess(verify_second_identity(chars, 2, 3).residual, 1e-10)

    def test_second_identity_fuzz(self):
        records = fuzz_second_identity(100, seed=11)
        self.assertLess(max(record.residual for record in records), 1e-9)


class CyclotomicTests(SimpleTestCase):
    def test_up_factor_example(self):
        self.assertAlmostEqual(up_factor(2, (1, 1, 1, 1)), -1.25, delta=1e-15)

    def test_analytic_floor(self):
        rng = np.random.default_rng(14)
        for m in range(5, 30):
            values = np.exp(2j * np.pi * rng.uniform(size=(2000, 4)))
            found = np.abs(up_factor(m, values.T))
            self.assertGreaterEqual(found.min(), analytic_floor(m) - 1e-12)

    def test_scan_small_orders(self):
        for result in cyclotomic_scan(12, (2, 3, 4)):
            self.assertGreater(result.minimum, 0)

    @tag("slow")
    def test_scan_order_24(self):
        results = cyclotomic_scan(24, (2, 3, 4))
        self.assertEqual([r.modulus for r in results], [2, 3, 4])
        self.assertTrue(all(r.minimum > 0 for r in results))

    def test_small_primes_low_conductor(self):
        results = small_prime_scan(max_prime=12, max_conductor=15)
        self.assertEqual([r.modulus for r in results], [2, 3, 5, 7, 11])
        self.assertEqual([r.method for r in results], ["exhaustive"] * 2 + ["floor"] * 3)
        self.assertTrue(all(r.minimum > 0 for r in results))

    def test_character_values_are_roots_of_unity(self):
        angles = character_values_at(2, 15)
        self.assertTrue(angles)
        values = np.exp(2j * np.pi * np.array([float(a) for a in angles]))
        np.testing.assert_allclose(np.abs(values), 1.0, atol=1e-15)
        self.assertGreater(small_prime_scan(3, 15)[0].minimum, 0)

    @tag("slow")
    def test_small_primes(self):
        self.assertTrue(all(r.minimum > 0 for r in small_prime_scan(64, 50)))
