from math import cos, gcd, pi, sqrt

import numpy as np
from django.test import SimpleTestCase
from sympy import divisors, mobius, totient

from chargroup.characters import (
    DirichletCharacter,
    character_table,
    crt_factor,
    even_primitive_characters,
    principal,
    quadratic_character,
    trivial,
    unit_group,
)
from chargroup.exceptions import CharacterError, ModulusError, NonCoprimeSplit
from chargroup.quadruple import Quadruple
from chargroup.sums import (
    convolve,
    dirichlet_convolution,
    epsilon,
    gauss_sum,
    hybrid_kloosterman,
    kloosterman,
    ramanujan,
    ramanujan_closed_form,
    verify_mult_k,
    weil_bound,
)


def cubic_character_mod_7():
    return [chi for chi in even_primitive_characters(7) if chi.order == 3][0]


class UnitGroupTests(SimpleTestCase):
    def test_orders_multiply_to_totient(self):
        for m in range(1, 301):
            group = unit_group(m)
            self.assertEqual(group.order, int(totient(m)))

    def test_exponent_vectors_are_unique(self):
        for m in (8, 16, 45, 60, 97, 128, 210, 243, 1000):
            group = unit_group(m)
            units = np.flatnonzero(group.units)
            vectors = {tuple(group.dlog_table[:, a]) for a in units}
            self.assertEqual(len(vectors), int(totient(m)))

    def test_generators_generate(self):
        for m in (9, 20, 24, 63, 100, 360):
            group = unit_group(m)
            reached = {1}
            for g, order in zip(group.generators, group.cyclic_orders):
                reached = {r * pow(g, e, m) % m for r in reached for e in range(order)}
            self.assertEqual(len(reached), int(totient(m)))

    def test_modulus_out_of_range(self):
        with self.assertRaises(ModulusError):
            character_table(0)


class CharacterTableTests(SimpleTestCase):
    def test_trivial_modulus(self):
        table = character_table(1)
        self.assertEqual(len(table), 1)
        chi = table[0]
        self.assertTrue(chi.is_even)
        self.assertTrue(chi.is_primitive)
        self.assertEqual(chi.conductor, 1)

    def test_mod_five(self):
        table = character_table(5)
        self.assertEqual(len(table), 4)
        self.assertEqual(sum(chi.is_even for chi in table), 2)
        self.assertEqual(len(even_primitive_characters(5)), 1)
        self.assertIn(principal(5), table)

    def test_mod_seven(self):
        self.assertEqual(len(character_table(7)), 6)
        evens = even_primitive_characters(7)
        self.assertEqual(len(evens), 2)
        self.assertTrue(all(chi.order == 3 for chi in evens))

    def test_primitive_count_matches_mobius_formula(self):
        for m in range(1, 121):
            expected = sum(int(mobius(m // d)) * int(totient(d)) for d in divisors(m))
            found = sum(chi.is_primitive for chi in character_table(m))
            self.assertEqual(found, expected, m)

    def test_no_even_primitive_mod_three_or_four(self):
        self.assertEqual(even_primitive_characters(3), [])
        self.assertEqual(even_primitive_characters(4), [])


class EvaluationTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(principal(5)(7), 1)
        self.assertEqual(quadratic_character(5)(2), -1)
        for chi in character_table(5):
            self.assertEqual(chi(10), 0)

    def test_complete_multiplicativity(self):
        rng = np.random.default_rng(11)
        for m in (60, 77, 101):
            for chi in character_table(m)[:12]:
                for a, b in rng.integers(1, 10**6, size=(1000, 2)):
                    self.assertAlmostEqual(chi(a * b), chi(a) * chi(b), delta=1e-12)

    def test_values_are_roots_of_unity(self):
        for chi in character_table(36):
            units = np.flatnonzero(chi.group.units)
            powers = chi.values[units] ** chi.order
            self.assertTrue(np.allclose(powers, 1.0, atol=1e-12))

    def test_conjugate_and_product(self):
        chi = cubic_character_mod_7()
        self.assertTrue((chi * chi.conj()).is_principal)
        psi = quadratic_character(5) * chi
        self.assertEqual(psi.modulus, 35)
        for n in range(1, 200):
            self.assertAlmostEqual(psi(n), quadratic_character(5)(n) * chi(n), delta=1e-12)
        self.assertTrue(psi.is_primitive)

    def test_primitive_of_induced_character(self):
        chi = quadratic_character(5).induce(20)
        self.assertEqual(chi.conductor, 5)
        self.assertEqual(chi.primitive(), quadratic_character(5))


class GaussSumTests(SimpleTestCase):
    def test_trivial(self):
        self.assertAlmostEqual(gauss_sum(trivial()), 1, delta=1e-15)
        self.assertAlmostEqual(epsilon(trivial()), 1, delta=1e-15)

    def test_quadratic_mod_five(self):
        self.assertAlmostEqual(gauss_sum(quadratic_character(5)), sqrt(5), delta=1e-12)

    def test_imprimitive_principal_mod_six(self):
        self.assertAlmostEqual(gauss_sum(principal(6)), 1, delta=1e-12)

    def test_modulus_of_primitive_gauss_sums(self):
        for m in range(1, 201):
            for chi in character_table(m):
                if chi.is_primitive:
                    self.assertAlmostEqual(abs(gauss_sum(chi)), sqrt(m), delta=1e-10)


class CrtFactorTests(SimpleTestCase):
    def test_mod_fifteen(self):
        chi = quadratic_character(3) * quadratic_character(5)
        first, second = crt_factor(chi, 3, 5)
        self.assertEqual(first, quadratic_character(3))
        self.assertEqual(second, quadratic_character(5))
        for n in range(1, 16):
            self.assertAlmostEqual(chi(n), first(n) * second(n), delta=1e-12)

    def test_trivial_split(self):
        chi = quadratic_character(7)
        self.assertEqual(crt_factor(chi, 7, 1), (chi, trivial()))

    def test_principal_split(self):
        self.assertEqual(crt_factor(principal(6), 2, 3), (principal(2), principal(3)))

    def test_random_splits(self):
        rng = np.random.default_rng(5)
        done = 0
        while done < 50:
            m1, m2 = (int(v) for v in rng.integers(1, 40, size=2))
            if gcd(m1, m2) != 1:
                continue
            table = character_table(m1 * m2)
            chi = table[int(rng.integers(len(table)))]
            first, second = crt_factor(chi, m1, m2)
            for n in range(m1 * m2):
                self.assertAlmostEqual(chi(n), first(n) * second(n), delta=1e-12)
            done += 1

    def test_non_coprime_split(self):
        with self.assertRaises(NonCoprimeSplit):
            crt_factor(principal(12), 2, 6)


class ConvolutionTests(SimpleTestCase):
    def test_examples(self):
        chi5 = quadratic_character(5)
        self.assertEqual(convolve(chi5, chi5, 1), 1)
        self.assertAlmostEqual(convolve(trivial(), trivial(), 12), 6)
        self.assertAlmostEqual(convolve(trivial(), chi5, 4), 1)

    def test_array_convolution_matches_divisor_sum(self):
        chi_a, chi_b = quadratic_character(5), cubic_character_mod_7()
        size = 300
        n = np.arange(size + 1)
        h = dirichlet_convolution(chi_a.at(n), chi_b.at(n))
        for k in range(1, size + 1):
            self.assertAlmostEqual(h[k], convolve(chi_a, chi_b, k), delta=1e-11)

    def test_multiplicative(self):
        chi_a, chi_b = quadratic_character(13), cubic_character_mod_7()
        for m, n in ((4, 9), (8, 15), (7, 26)):
            self.assertAlmostEqual(
                convolve(chi_a, chi_b, m * n),
                convolve(chi_a, chi_b, m) * convolve(chi_a, chi_b, n),
                delta=1e-11,
            )


class KloostermanTests(SimpleTestCase):
    def test_examples(self):
        self.assertAlmostEqual(kloosterman(1, 1, 5).real, 2 + 2 * cos(4 * pi / 5), delta=1e-12)
        self.assertAlmostEqual(ramanujan(7, 7).real, 6, delta=1e-12)
        self.assertAlmostEqual(
            hybrid_kloosterman(principal(12), 5, 7, 12), kloosterman(5, 7, 12), delta=1e-12
        )

    def test_real_and_weil_bound(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            m, n = (int(v) for v in rng.integers(-50, 50, size=2))
            c = int(rng.integers(1, 120))
            value = kloosterman(m, n, c)
            self.assertLess(abs(value.imag), 1e-9)
            self.assertLessEqual(abs(value), weil_bound(m, n, c) + 1e-9)

    def test_ramanujan_closed_form(self):
        for q in range(1, 40):
            for n in range(0, 40):
                self.assertAlmostEqual(ramanujan(q, n).real, ramanujan_closed_form(q, n), delta=1e-9)

    def test_modulus_must_divide(self):
        with self.assertRaises(CharacterError):
            hybrid_kloosterman(quadratic_character(5), 1, 1, 7)


class MultKTests(SimpleTestCase):
    def test_principal(self):
        self.assertLess(verify_mult_k(principal(3), principal(5), 1, 1).residual, 1e-9)

    def test_unit_second_modulus(self):
        self.assertEqual(verify_mult_k(quadratic_character(5), trivial(), 2, 3).residual, 0)

    def test_quadratic_times_cubic(self):
        result = verify_mult_k(quadratic_character(5), cubic_character_mod_7(), 2, 3)
        self.assertLess(result.residual, 1e-9)

    def test_random_configurations(self):
        rng = np.random.default_rng(17)
        done = 0
        while done < 50:
            c, d = (int(v) for v in rng.integers(1, 30, size=2))
            if gcd(c, d) != 1:
                continue
            table_c, table_d = character_table(c), character_table(d)
            phi1 = table_c[int(rng.integers(len(table_c)))]
            phi2 = table_d[int(rng.integers(len(table_d)))]
            a, b = (int(v) for v in rng.integers(-20, 20, size=2))
            self.assertLess(verify_mult_k(phi1, phi2, a, b).residual, 1e-9)
            done += 1

    def test_non_coprime(self):
        with self.assertRaises(NonCoprimeSplit):
            verify_mult_k(principal(6), principal(4), 1, 1)


class QuadrupleTests(SimpleTestCase):
    def test_build_and_qhat(self):
        quadruple = Quadruple.build(101, (1, 5, 7, 11))
        self.assertAlmostEqual(quadruple.qhat, 101 * 385**0.25 / pi, delta=1e-12)
        self.assertEqual(quadruple.ell_tilde, (1, 1))
        self.assertEqual(quadruple.replace(ell=(6, 4)).ell_tilde, (3, 2))

    def test_rejects_bad_configurations(self):
        chars = (trivial(), quadratic_character(5), trivial(), trivial())
        with self.assertRaises(CharacterError):
            Quadruple(100, (1, 5, 1, 1), chars)
        with self.assertRaises(CharacterError):
            Quadruple(5, (1, 5, 1, 1), chars)
        with self.assertRaises(CharacterError):
            Quadruple.build(101, (1, 3, 5, 7))
        with self.assertRaises(CharacterError):
            Quadruple(101, (1, 5, 1, 1), chars, ell=(101, 1))

    def test_odd_character_rejected(self):
        odd = [chi for chi in character_table(5) if not chi.is_even][0]
        with self.assertRaises(CharacterError):
            Quadruple(11, (1, 5, 1, 1), (trivial(), odd, trivial(), trivial()))

    def test_characters_are_hashable(self):
        self.assertEqual(len({DirichletCharacter(5, (2,)), quadratic_character(5)}), 1)
