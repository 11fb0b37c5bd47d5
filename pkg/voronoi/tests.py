import cmath
import math

from django.test import SimpleTestCase, tag

from chargroup.characters import principal, quadratic_character, trivial
from special.quadrature import BumpFunction
from voronoi.exceptions import TailTooLarge, VoronoiError
from voronoi.formula import (
    GRID,
    REFERENCE_GRID,
    VoronoiConfig,
    branch_weights,
    dual_prefactor,
    grid_configs,
    lhs_sum,
    main_terms,
    prefactor_from_gauss_sums,
    primitive_characters,
    rhs_value,
    verify_voronoi,
)


def e(x):
    return cmath.exp(2j * math.pi * x)


def reference(index):
    return grid_configs(REFERENCE_GRID)[index]


class ConfigTests(SimpleTestCase):
    def test_from_dict(self):
        cfg = VoronoiConfig.from_dict({"a": 1, "c": 15, "D": [3, 5], "choice": [0, 1]})
        self.assertEqual(cfg.chi2, quadratic_character(5))
        self.assertEqual(cfg.chi1, quadratic_character(3))
        self.assertEqual(cfg.split, ((1, 3), (1, 5)))
        self.assertEqual(cfg.scale, 15)
        self.assertEqual(cfg.as_dict()["D"], [3, 5])

    def test_invalid(self):
        chi5 = quadratic_character(5)
        with self.assertRaises(VoronoiError):
            VoronoiConfig(3, 6, trivial(), chi5)
        with self.assertRaises(VoronoiError):
            VoronoiConfig(1, 3, trivial(), principal(5))
        with self.assertRaises(VoronoiError):
            VoronoiConfig(1, 7, quadratic_character(3), primitive_characters(15)[0])
        with self.assertRaises(VoronoiError):
            VoronoiConfig.from_dict({"a": 1, "D": [1, 5]})

    def test_grid(self):
        configs = grid_configs()
        self.assertEqual(len(configs), 12)
        self.assertEqual(len({(c.a, c.c, c.D1, c.D2, c.bump.support) for c in configs}), 12)
        parities = {c.chi1.parity * c.chi2.parity for c in configs}
        self.assertEqual(parities, {1, -1})
        self.assertEqual(GRID[: len(REFERENCE_GRID)], REFERENCE_GRID)


class SummationTests(SimpleTestCase):
    def test_lhs_by_hand(self):
        cfg = reference(0)
        g = cfg.bump
        expected = 2 * e(2 / 3) * g(11) + e(1 / 3) * g(16) + 2 * e(1 / 3) * g(19)
        self.assertLess(abs(lhs_sum(cfg) - expected), 1e-14)

    def test_empty_support(self):
        cfg = VoronoiConfig(1, 3, trivial(), quadratic_character(5), BumpFunction((10.2, 10.8)))
        self.assertEqual(lhs_sum(cfg), 0)

    def test_shift_a_by_c(self):
        cfg = reference(0)
        shifted = VoronoiConfig(cfg.a + cfg.c, cfg.c, cfg.chi1, cfg.chi2, cfg.bump)
        self.assertLess(abs(lhs_sum(cfg) - lhs_sum(shifted)), 1e-12)

    def test_main_term_indicators(self):
        cfg = VoronoiConfig.from_dict({"a": 1, "c": 2, "D": [3, 5], "choice": [0, 1]})
        self.assertEqual(main_terms(cfg), (0j, 0j))
        first, second = main_terms(reference(1))
        self.assertNotEqual(second, 0)
        self.assertEqual(first, 0)

    def test_branch_weights(self):
        wy, wj, wk = branch_weights(reference(0))
        self.assertEqual(wj, 0)
        self.assertAlmostEqual(wy, -2 * math.pi)
        self.assertEqual(wk, 4)
        wy, wj, wk = branch_weights(reference(2))
        self.assertEqual(wy, 0)
        self.assertAlmostEqual(wj, -2j * math.pi)
        self.assertEqual(wk, 0)

    def test_pole_configuration(self):
        cfg = VoronoiConfig(1, 3, trivial(), trivial())
        with self.assertRaises(VoronoiError):
            rhs_value(cfg)

    def test_prefactor_from_gauss_sums(self):
        for cfg in grid_configs():
            self.assertLess(abs(dual_prefactor(cfg) - prefactor_from_gauss_sums(cfg)), 1e-13)
            self.assertAlmostEqual(abs(dual_prefactor(cfg)), 1 / cfg.scale, places=13)

    def test_tail_too_large(self):
        cfg = VoronoiConfig.from_dict({"a": 1, "c": 3, "D": [1, 5], "choice": [0, 1], "dual_cutoff": 64})
        with self.assertRaises(TailTooLarge):
            rhs_value(cfg)

    def test_reference_configurations(self):
        for index in range(len(REFERENCE_GRID)):
            result = verify_voronoi(reference(index))
            self.assertLess(result.residual, 1e-6)
            self.assertTrue(result.passed)

    def test_cutoff_independence(self):
        cfg = reference(0)
        adaptive = rhs_value(cfg)
        doubled = rhs_value(cfg, dual_terms=2 * adaptive.dual_cutoff)
        self.assertLess(abs(adaptive.value - doubled.value), adaptive.tail + 1e-10)

    @tag("slow")
    def test_grid(self):
        for cfg in grid_configs():
            result = verify_voronoi(cfg)
            self.assertLess(result.residual, 1e-5, cfg.as_dict())
