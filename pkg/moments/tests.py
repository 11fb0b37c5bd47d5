from math import gcd

import mpmath
import numpy as np
from django.test import SimpleTestCase, tag

from chargroup.characters import even_primitive_characters, quadratic_character
from chargroup.quadruple import Quadruple
from eulerprod.products import factor_F, factor_H
from lfun.afe import root_factor
from lfun.lvalues import l_value
from moments.brute import (
    averaged_first_sum,
    brute_force_moment,
    congruence_first_sum,
    resolve_method,
)
from moments.determinant import (
    COLUMN_SPLITS,
    ROW_PERMUTATIONS,
    leading_coefficient_margin,
    scan_configuration,
    scan_configurations,
    sixfold_matrix,
)
from moments.exceptions import ConfluentCharacters, MomentError
from moments.family import (
    congruence_form,
    enumerate_even_primitive,
    orthogonality_sum,
    phi_plus,
    root_number,
)
from moments.prediction import (
    R,
    main_term_M,
    moment_report,
    residual_trend,
    six_term_prediction,
    six_terms,
    untwisted_coefficients,
    untwisted_prediction,
)


def relative(first, second):
    return abs(first - second) / max(1.0, abs(first), abs(second))


def permuted(quadruple, perm):
    return Quadruple(
        quadruple.q,
        tuple(quadruple.D[k] for k in perm),
        tuple(quadruple.chars[k] for k in perm),
        quadruple.t,
        quadruple.ell,
    )


def conjugated(quadruple, t):
    return Quadruple(quadruple.q, quadruple.D, tuple(chi.conj() for chi in quadruple.chars), t, quadruple.ell)


class FamilyTests(SimpleTestCase):
    def test_family_sizes(self):
        self.assertEqual(phi_plus(5), 1)
        self.assertEqual(phi_plus(7), 2)
        self.assertEqual(phi_plus(13), 5)
        for chi in enumerate_even_primitive(13):
            self.assertTrue(chi.is_even and chi.is_primitive)

    def test_small_or_composite_q(self):
        for q in (2, 3, 9):
            with self.assertRaises(MomentError):
                enumerate_even_primitive(q)

    def test_orthogonality(self):
        for q in (7, 11, 13):
            family = enumerate_even_primitive(q)
            for m in range(1, 2 * q):
                for n in range(1, 2 * q):
                    if gcd(m * n, q) != 1:
                        self.assertEqual(orthogonality_sum(q, m, n), 0)
                        continue
                    exact = orthogonality_sum(q, m, n)
                    self.assertEqual(exact, congruence_form(q, m, n))
                    direct = sum(chi(m) * np.conj(chi(n)) for chi in family)
                    self.assertAlmostEqual(direct, exact, delta=1e-10)

    def test_congruence_form_needs_units(self):
        with self.assertRaises(MomentError):
            congruence_form(7, 14, 1)

    def test_root_number_examples(self):
        self.assertAlmostEqual(root_number(Quadruple.build(13, (1, 1, 1, 1))), 1, delta=1e-12)
        chi = quadratic_character(5)
        quadruple = Quadruple.build(13, (1, 5, 1, 1))
        self.assertEqual(quadruple.chars[1], chi)
        self.assertAlmostEqual(root_number(quadruple), chi(13), delta=1e-12)

    def test_root_number_has_unit_modulus(self):
        rng = np.random.default_rng(5)
        pool = (1, 5, 7, 11, 13)
        for _ in range(50):
            D = tuple(int(d) for d in rng.choice(pool, size=4, replace=False))
            q = int(rng.choice([17, 19, 23, 29]))
            choice = tuple(int(c) for c in rng.integers(0, 5, size=4))
            self.assertAlmostEqual(abs(root_number(Quadruple.build(q, D, choice=choice))), 1, delta=1e-12)

    def test_root_number_against_afe_root(self):
        quadruple = Quadruple.build(13, (1, 5, 7, 1), t=0.7, choice=(0, 0, 1, 0))
        D1, D2, D3, D4 = quadruple.D
        for chi in enumerate_even_primitive(13):
            expected = (
                root_number(quadruple)
                * chi(D1 * D2)
                * np.conj(chi(D3 * D4))
                * np.exp(-0.7j * np.log(D1 * D2 / (D3 * D4)))
            )
            self.assertAlmostEqual(root_factor(quadruple, chi), expected, delta=1e-12)


class BruteForceTests(SimpleTestCase):
    def test_equal_twists_cancel(self):
        quadruple = Quadruple.build(13, (1, 5, 7, 1), t=0.2)
        reference = brute_force_moment(quadruple, method="hurwitz", workers=1).value
        twisted = brute_force_moment(quadruple.replace(ell=(2, 2)), method="hurwitz", workers=1).value
        self.assertAlmostEqual(twisted, reference, delta=1e-12 * max(1, abs(reference)))

    def test_conjugation(self):
        quadruple = Quadruple.build(13, (1, 5, 7, 1), t=0.3, ell=(2, 3), choice=(0, 0, 1, 0))
        value = brute_force_moment(quadruple, method="hurwitz", workers=1).value
        swapped = Quadruple(13, (7, 1, 1, 5), quadruple.chars[2:] + quadruple.chars[:2], 0.3, (3, 2))
        other = brute_force_moment(swapped, method="hurwitz", workers=1).value
        self.assertLess(relative(np.conj(value), other), 1e-12)

    def test_afe_against_hurwitz(self):
        quadruple = Quadruple.build(11, (1, 5, 1, 1), ell=(1, 2))
        afe = brute_force_moment(quadruple, method="afe", workers=1)
        hurwitz = brute_force_moment(quadruple, method="hurwitz", workers=1)
        self.assertEqual(afe.character_count, 4)
        self.assertLess(relative(afe.value, hurwitz.value), 1e-8)

    def test_method_choice(self):
        quadruple = Quadruple.build(101, (1, 5, 7, 11))
        self.assertEqual(resolve_method(quadruple, "auto", max_terms=10**6), "hurwitz")
        self.assertEqual(resolve_method(Quadruple.build(7, (1, 1, 1, 1)), "auto"), "afe")
        with self.assertRaises(MomentError):
            resolve_method(quadruple, "exact")

    def test_truncation_failure_names_a_character(self):
        quadruple = Quadruple.build(11, (1, 5, 1, 1))
        with self.assertRaisesMessage(MomentError, "chi_11"):
            brute_force_moment(quadruple, method="afe", max_terms=100, workers=1)

    def test_orthogonality_split(self):
        for q, ell in ((7, (1, 1)), (7, (2, 3)), (13, (1, 1))):
            quadruple = Quadruple.build(q, (1, 5, 1, 1), ell=ell)
            averaged = averaged_first_sum(quadruple)
            congruence = congruence_first_sum(quadruple)
            self.assertLess(relative(averaged, congruence), 1e-10)


class PredictionTests(SimpleTestCase):
    def setUp(self):
        self.quadruple = Quadruple.build(13, (1, 5, 7, 11), t=0.4, ell=(2, 3), choice=(0, 0, 1, 2))

    def test_confluent_characters(self):
        with self.assertRaises(ConfluentCharacters) as caught:
            six_term_prediction(Quadruple.build(13, (1, 1, 1, 1)))
        self.assertEqual(caught.exception.term, "diagonal")

    def test_main_term_at_unit_twists(self):
        chars = self.quadruple.chars
        a, b, c, d = chars
        l_product = 1
        for left in (a, b):
            for right in (c, d):
                l_product *= l_value(left * right.conj(), 1)
        expected = factor_F(1, 1, 1, chars) * factor_H(1, chars, complete_tail=True).value * l_product
        self.assertLess(relative(main_term_M(chars, 1, 1), expected), 1e-9)
        self.assertLess(relative(main_term_M(chars, 3, 3, t=0.4), expected), 1e-12)

    def test_six_terms(self):
        terms = six_terms(self.quadruple)
        self.assertEqual(
            list(terms), ["diagonal", "(3,4|1,2)", "(1<->3)", "(1<->4)", "(2<->3)", "(2<->4)"]
        )
        self.assertAlmostEqual(six_term_prediction(self.quadruple), sum(terms.values()), delta=1e-12)

    def test_symmetric_under_pair_swaps(self):
        value = six_term_prediction(self.quadruple)
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2)):
            other = six_term_prediction(permuted(self.quadruple, perm))
            self.assertLess(relative(value, other), 1e-10)

    def test_t_conjugation(self):
        value = six_term_prediction(self.quadruple)
        mirrored = six_term_prediction(conjugated(self.quadruple, -self.quadruple.t))
        self.assertLess(relative(np.conj(value), mirrored), 1e-10)

    def test_untwisted_against_six_terms(self):
        rng = np.random.default_rng(17)
        pool = (1, 5, 7, 11, 13)
        for _ in range(20):
            D = tuple(int(d) for d in rng.choice(pool, size=4, replace=False))
            q = int(rng.choice([17, 19, 23, 29, 31]))
            choice = tuple(int(c) for c in rng.integers(0, 5, size=4))
            quadruple = Quadruple.build(q, D, t=float(rng.uniform(-1, 1)), choice=choice)
            self.assertLess(relative(untwisted_prediction(quadruple), six_term_prediction(quadruple)), 1e-9)

    def test_untwisted_needs_unit_twists(self):
        with self.assertRaises(MomentError):
            untwisted_prediction(self.quadruple)

    def test_R(self):
        chars = self.quadruple.chars
        self.assertAlmostEqual(R(chars, (0, 1, 2, 3)), R(chars, (1, 0, 3, 2)), delta=1e-12)
        coefficient, split = untwisted_coefficients(chars, 13)[0]
        self.assertEqual((coefficient, split), (1, (0, 1, 2, 3)))

    @tag("slow")
    def test_report_at_q_101(self):
        report = moment_report(Quadruple.build(101, (1, 5, 7, 11)), method="auto", workers=1)
        self.assertEqual(report.method, "hurwitz")
        self.assertEqual(report.character_count, 49)
        self.assertAlmostEqual(
            report.prediction, report.diagonal_term + sum(report.swap_terms.values()), delta=1e-10
        )
        self.assertAlmostEqual(report.residual, report.brute_force - report.prediction, delta=1e-12)

    @tag("slow")
    def test_residual_trend(self):
        reports, violations = residual_trend(Quadruple.build(101, (1, 5, 7, 11)), (101, 211, 401), workers=1)
        self.assertEqual([r.quadruple.q for r in reports], [101, 211, 401])
        self.assertTrue(set(violations) <= {211, 401})
        self.assertTrue(all(np.isfinite(r.relative_residual) for r in reports))


class DeterminantTests(SimpleTestCase):
    def setUp(self):
        self.quadruple = Quadruple.build(13, (1, 5, 7, 11), choice=(0, 0, 1, 2))

    def test_all_trivial_moduli(self):
        matrix = sixfold_matrix(Quadruple.build(13, (1, 1, 1, 1)).chars, 1)
        np.testing.assert_allclose(matrix, np.ones((6, 6)), atol=1e-14)
        self.assertLess(abs(np.linalg.det(matrix)), 1e-12)

    def test_unit_diagonal(self):
        for residue in (1, 2, 13, 384):
            matrix = sixfold_matrix(self.quadruple.chars, residue)
            self.assertTrue(np.all(np.diag(matrix) == 1))

    def test_conjugate_rows(self):
        matrix = sixfold_matrix(self.quadruple.chars, 13)
        pairs = [1, 0, 3, 2, 5, 4]
        np.testing.assert_allclose(matrix[1], np.conj(matrix[0][pairs]), atol=1e-12)

    def test_rows_are_permuted_predictions(self):
        matrix = sixfold_matrix(self.quadruple.chars, 13)
        vector = np.array([R(self.quadruple.chars, split) for split in COLUMN_SPLITS])
        for row, perm in enumerate(ROW_PERMUTATIONS):
            expected = untwisted_prediction(permuted(self.quadruple, perm))
            self.assertLess(relative(matrix[row] @ vector, expected), 1e-10)

    def test_high_precision_matrix(self):
        double = np.linalg.det(sixfold_matrix(self.quadruple.chars, 13))
        with mpmath.workdps(34):
            exact = mpmath.det(sixfold_matrix(self.quadruple.chars, 13, high_precision=True))
        self.assertAlmostEqual(complex(exact), double, delta=1e-10)

    def test_margin(self):
        self.assertLessEqual(leading_coefficient_margin((1, 5, 7, 11)), 0)
        self.assertGreater(leading_coefficient_margin((1, 5, 7, 13)), 0)
        configurations = scan_configurations()
        for D in ((1, 3, 5, 7), (1, 3, 5, 37), (1, 3, 7, 19), (1, 5, 7, 11)):
            self.assertIn(D, configurations)
        self.assertNotIn((1, 3, 7, 23), configurations)
        self.assertTrue(all(leading_coefficient_margin(D) <= 0 for D in configurations))

    def test_vacuous_configuration(self):
        records = scan_configuration((1, 3, 5, 7))
        self.assertEqual(len(records), 1)
        self.assertTrue(records[0].vacuous)

    def test_residues_of_one_tuple(self):
        chars = self.quadruple.chars
        for residue in range(1, 385):
            if gcd(residue, 385) == 1:
                self.assertGreater(abs(np.linalg.det(sixfold_matrix(chars, residue))), 0)

    @tag("slow")
    def test_scan_reference_configuration(self):
        records = scan_configuration((1, 5, 7, 11))
        self.assertEqual(len(records), 8 * 240)
        self.assertTrue(all(not r.vacuous and r.det_modulus > 0 for r in records))
