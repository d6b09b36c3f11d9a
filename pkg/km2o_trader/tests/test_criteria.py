# KM2O Trader - stationarity regimes and rule-based trading on daily prices
# Copyright (C) 2025 KM2O Trader contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""
Test suite for the white-noise criteria and the relaxed Test(S) verdict
"""

import math
import unittest

import numpy as np

from km2o_trader.core.exceptions import ValidationError
from km2o_trader.plugins.stationarity.utils.criteria import (
    DEGENERATE_RATES,
    PairRates,
    block_counts,
    criterion_mean,
    criterion_orthogonality,
    criterion_variance,
    evaluate_pieces,
    lag_budget,
    mean_passes,
    orthogonality_fraction,
    orthogonality_passes,
    piece_order,
    rate_thresholds,
    test_s,
    variance_passes,
    variance_statistic,
    verdict_from_rates,
    window_pair_rates,
)
from km2o_trader.tests.base_test import BaseTraderTest


def variance_switch_pair(length: int = 101, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    values = rng.standard_normal((length, 2))
    values[length // 2 :] *= 10.0
    return values


class TestSizes(BaseTraderTest):
    def test_piece_order(self):
        self.assertEqual(piece_order(101), 14)
        self.assertEqual(piece_order(100), 14)
        self.assertEqual(piece_order(17), 5)

    def test_lag_budget(self):
        self.assertEqual(lag_budget(30), 14)
        self.assertEqual(lag_budget(12), 5)
        self.assertEqual(lag_budget(200), 42)

    def test_rate_thresholds(self):
        np.testing.assert_allclose(rate_thresholds(1.0), (0.8, 0.7, 0.8))
        np.testing.assert_allclose(rate_thresholds(0.5), (0.4, 0.35, 0.4))
        for alpha in (0.0, -0.1, 1.5):
            with self.assertRaises(ValidationError):
                rate_thresholds(alpha)


class TestBlockCounts(BaseTraderTest):
    def test_known_split(self):
        self.assertEqual(block_counts(1, 0, 30), (14, 15))

    def test_counts_cover_all_products(self):
        size = 60
        for n in range(1, 6):
            for m in range(0, 6):
                first, second = block_counts(n, m, size)
                self.assertGreater(first, 0)
                self.assertGreater(second, 0)
                self.assertEqual(first + second, size - n - m, f"n={n} m={m}")

    def test_counts_never_negative(self):
        for n in range(1, 8):
            for m in range(0, 16):
                first, second = block_counts(n, m, 16)
                self.assertGreaterEqual(first, 0)
                self.assertGreaterEqual(second, 0)


class TestCriteria(BaseTraderTest):
    def test_mean(self):
        self.assertTrue(criterion_mean(np.array([1.0, -1.0, 1.0, -1.0])))
        # sqrt(4) * 1 = 2 is past the bound
        self.assertFalse(criterion_mean(np.ones(4)))

    def test_variance(self):
        self.assertEqual(float(variance_statistic(np.ones(5))[0]), 0.0)
        self.assertTrue(criterion_variance(np.ones(5)))
        self.assertAlmostEqual(float(variance_statistic(np.full(9, 2.0))[0]), 3.0)
        self.assertFalse(criterion_variance(np.full(9, 2.0)))

    def test_constant_pieces_of_full_order(self):
        # flattened xi of a piece at order 14 has 30 values
        self.assertFalse(criterion_mean(np.full(30, 2.0)))
        self.assertAlmostEqual(float(variance_statistic(np.zeros(30))[0]), -math.sqrt(30))
        self.assertFalse(criterion_variance(np.zeros(30)))

    def test_vectorized_rows_match_scalar(self):
        xi = np.random.default_rng(2).normal(size=(6, 30))
        fractions = orthogonality_fraction(xi)
        for row, fraction in zip(xi, fractions):
            self.assertAlmostEqual(float(orthogonality_fraction(row)[0]), float(fraction))

    def test_orthogonality_on_constant(self):
        self.assertEqual(float(orthogonality_fraction(np.ones(30))[0]), 0.0)
        self.assertFalse(criterion_orthogonality(np.ones(30)))

    def test_orthogonality_on_white_noise(self):
        xi = np.random.default_rng(11).normal(size=(200, 30))
        self.assertGreater(float(np.mean(orthogonality_fraction(xi))), 0.9)

    def test_literal_mode(self):
        fraction = orthogonality_fraction(np.random.default_rng(3).normal(size=30), mode="literal")[0]
        self.assertTrue(math.isnan(fraction) or 0.0 <= fraction <= 1.0)

    def test_invalid_orthogonality_arguments(self):
        with self.assertRaises(ValidationError):
            orthogonality_fraction(np.ones(30), mode="product")
        with self.assertRaises(ValidationError):
            orthogonality_fraction(np.ones(30), budget=15)
        with self.assertRaises(ValidationError):
            orthogonality_fraction(np.ones(30), budget=0)


class TestVerdict(BaseTraderTest):
    def test_strict_thresholds(self):
        self.assertTrue(verdict_from_rates(PairRates(0.9, 0.8, 0.9), 1.0).passed)
        self.assertFalse(verdict_from_rates(PairRates(0.8, 0.8, 0.9), 1.0).passed)
        self.assertFalse(verdict_from_rates(PairRates(0.9, 0.7, 0.9), 1.0).passed)
        self.assertTrue(verdict_from_rates(PairRates(0.5, 0.4, 0.5), 0.5).passed)

    def test_degenerate_never_passes(self):
        verdict = verdict_from_rates(DEGENERATE_RATES, 0.1)
        self.assertFalse(verdict.passed)
        self.assertTrue(verdict.degenerate)

    def test_constant_component_is_degenerate(self):
        values = np.column_stack((np.random.default_rng(0).normal(size=101), np.full(101, 3.0)))
        rates = window_pair_rates(values)
        self.assertTrue(rates.degenerate)
        self.assertTrue(np.all(np.isnan(rates.as_array())))
        self.assertFalse(test_s(values, 0.5).passed)

    def test_short_series_rejected(self):
        with self.assertRaises(ValidationError):
            evaluate_pieces(np.random.default_rng(0).normal(size=(9, 2)))

    def test_piece_outcome_shapes(self):
        outcomes = evaluate_pieces(np.random.default_rng(1).normal(size=(101, 2)))
        self.assertEqual(len(outcomes.mean), 87)
        self.assertEqual(len(outcomes.variance), 87)
        self.assertEqual(len(outcomes.orthogonality), 87)

    def test_white_noise_passes_relaxed(self):
        passes = [test_s(np.random.default_rng(seed).normal(size=(101, 2)), 0.5).passed for seed in range(5)]
        self.assertGreaterEqual(sum(passes), 4)

    def test_variance_switch_fails(self):
        for seed in range(3):
            verdict = test_s(variance_switch_pair(seed=seed), 1.0)
            self.assertFalse(verdict.passed)
            self.assertLess(verdict.rate_var, 0.7)

    def test_rates_independent_of_alpha(self):
        values = np.random.default_rng(4).normal(size=(101, 2))
        low, high = test_s(values, 0.2), test_s(values, 1.0)
        self.assertEqual((low.rate_mean, low.rate_var, low.rate_orth), (high.rate_mean, high.rate_var, high.rate_orth))
        self.assertTrue(low.passed or not high.passed)


class TestCriterionCalibration(BaseTraderTest):
    """iid standard normal xi of length 30"""

    def setUp(self):
        super().setUp()
        self.xi = np.random.default_rng(30).standard_normal((10000, 30))

    def test_mean_pass_rate(self):
        self.assertAlmostEqual(float(np.mean(mean_passes(self.xi))), 0.95, delta=0.015)

    def test_variance_pass_rate(self):
        self.assertAlmostEqual(float(np.mean(variance_passes(self.xi))), 0.939, delta=0.02)

    def test_orthogonality_pass_rate(self):
        self.assertAlmostEqual(float(np.mean(orthogonality_passes(self.xi[:2000]))), 0.967, delta=0.02)


class TestCalibration(BaseTraderTest):
    def test_white_noise_pass_rate(self):
        self.require_calibration()
        rng = np.random.default_rng(2025)
        passes = [test_s(rng.standard_normal((101, 2)), 0.5).passed for _ in range(200)]
        self.assertGreaterEqual(np.mean(passes), 0.9)

    def test_variance_switch_rejection_rate(self):
        self.require_calibration()
        rejected = [not test_s(variance_switch_pair(seed=seed), 1.0).passed for seed in range(100)]
        self.assertGreaterEqual(np.mean(rejected), 0.95)


if __name__ == "__main__":
    unittest.main()
