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
Test suite for the KM2O-Langevin matrix system and whitening
"""

import unittest

import numpy as np

from km2o_trader.core.exceptions import DegenerateWindowError, ValidationError
from km2o_trader.plugins.stationarity.utils.km2o import (
    CovSequence,
    extract_pieces,
    is_positive_definite,
    levinson,
    sample_covariance,
    standardize,
    whitening_factor,
)
from km2o_trader.tests.base_test import BaseTraderTest


def dense_predictor(cov: CovSequence, order: int):
    """Forward coefficients A(1..n) and error covariance from the block Toeplitz normal equations"""
    dim = cov.matrices.shape[1]
    gram = np.zeros((order * dim, order * dim))
    for j in range(1, order + 1):
        for m in range(1, order + 1):
            gram[(j - 1) * dim : j * dim, (m - 1) * dim : m * dim] = cov.at(m - j)
    rhs = np.hstack([cov.at(m) for m in range(1, order + 1)])
    flat = rhs @ np.linalg.inv(gram)
    coefficients = [flat[:, (j - 1) * dim : j * dim] for j in range(1, order + 1)]
    error = cov.at(0) - sum(a @ cov.at(j + 1).T for j, a in enumerate(coefficients))
    return coefficients, error


def ar1(phi: float, length: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((length, 2))
    values = np.zeros((length, 2))
    for t in range(1, length):
        values[t] = phi * values[t - 1] + noise[t]
    return values


class TestCovariance(BaseTraderTest):
    def test_lag_zero_is_correlation(self):
        values = np.random.default_rng(0).normal(size=(200, 2))
        cov = sample_covariance(values, 3)
        np.testing.assert_allclose(np.diag(cov.at(0)), [1.0, 1.0])
        np.testing.assert_allclose(cov.at(0), cov.at(0).T)
        np.testing.assert_allclose(cov.at(-2), cov.at(2).T)

    def test_too_short_series(self):
        with self.assertRaises(ValidationError):
            sample_covariance(np.ones((4, 2)) + np.arange(8.0).reshape(4, 2), 3)

    def test_constant_component_is_degenerate(self):
        values = np.column_stack((np.arange(30.0), np.full(30, 2.0)))
        with self.assertRaises(DegenerateWindowError):
            standardize(values)

    def test_lag_beyond_range(self):
        cov = sample_covariance(np.random.default_rng(1).normal(size=(50, 2)), 2)
        with self.assertRaises(ValidationError):
            cov.at(3)


class TestLevinson(BaseTraderTest):
    def test_matches_dense_normal_equations(self):
        values = np.random.default_rng(3).normal(size=(80, 2))
        values[:, 1] += 0.5 * values[:, 0]
        order = 5
        cov = sample_covariance(values, order)
        system = levinson(cov, order)
        self.assertFalse(system.degenerate)

        for n in range(1, order + 1):
            coefficients, error = dense_predictor(cov, n)
            # gamma_plus(n, k) multiplies Z(k) and equals -A(n - k)
            for k in range(n):
                np.testing.assert_allclose(system.gamma_plus[n][k], -coefficients[n - k - 1], atol=1e-10)
            np.testing.assert_allclose(system.v_plus[n], error, atol=1e-10)
            np.testing.assert_allclose(system.delta_plus[n], system.gamma_plus[n][0])

    def test_oracle_on_random_sequences(self):
        rng = np.random.default_rng(2024)
        for case in range(100):
            order = 1 + case % 14
            length = int(rng.integers(2 * order + 40, 2 * order + 160))
            mixing = rng.normal(size=(2, 2)) + 2.0 * np.eye(2)
            values = rng.normal(size=(length, 2)) @ mixing.T
            values[1:] += 0.4 * values[:-1]
            cov = sample_covariance(values, order)
            system = levinson(cov, order)
            self.assertFalse(system.degenerate, f"case {case}")

            coefficients, error = dense_predictor(cov, order)
            for k in range(order):
                np.testing.assert_allclose(system.gamma_plus[order][k], -coefficients[order - k - 1], atol=1e-8)
            np.testing.assert_allclose(system.v_plus[order], error, atol=1e-8)
            for v in system.v_plus:
                w = whitening_factor(v)
                np.testing.assert_allclose(w @ w.T, v, atol=1e-10)

    def test_white_covariance_is_trivial(self):
        matrices = np.zeros((6, 2, 2))
        matrices[0] = np.eye(2)
        system = levinson(CovSequence(matrices=matrices, length=100), 5)
        self.assertFalse(system.degenerate)
        for n in range(1, 6):
            np.testing.assert_allclose(system.gamma_plus[n], np.zeros((n, 2, 2)))
            np.testing.assert_allclose(system.v_plus[n], np.eye(2))

    def test_geometric_covariance(self):
        # R(n) = 0.5^n I is an exact AR(1) with coefficient 0.5
        matrices = np.array([0.5**n * np.eye(2) for n in range(6)])
        system = levinson(CovSequence(matrices=matrices, length=100), 5)
        self.assertFalse(system.degenerate)
        for n in range(1, 6):
            np.testing.assert_allclose(system.gamma_plus[n][n - 1], -0.5 * np.eye(2), atol=1e-12)
            np.testing.assert_allclose(system.gamma_plus[n][: n - 1], np.zeros((n - 1, 2, 2)), atol=1e-12)
            np.testing.assert_allclose(system.v_plus[n], 0.75 * np.eye(2), atol=1e-12)

    def test_ar1_coefficients_recovered(self):
        values = ar1(0.6, 5000, seed=7)
        system = levinson(sample_covariance(values, 3), 3)
        np.testing.assert_allclose(system.gamma_plus[3][2], -0.6 * np.eye(2), atol=0.06)
        np.testing.assert_allclose(system.gamma_plus[3][0], np.zeros((2, 2)), atol=0.06)
        np.testing.assert_allclose(system.gamma_plus[3][1], np.zeros((2, 2)), atol=0.06)
        np.testing.assert_allclose(system.delta_plus[1], -0.6 * np.eye(2), atol=0.06)

    def test_error_covariance_decreases(self):
        values = ar1(0.8, 3000, seed=9)
        system = levinson(sample_covariance(values, 4), 4)
        traces = [np.trace(v) for v in system.v_plus]
        self.assertTrue(all(b <= a + 1e-12 for a, b in zip(traces, traces[1:])))
        for v_plus, v_minus in zip(system.v_plus, system.v_minus):
            self.assertTrue(is_positive_definite(v_plus))
            self.assertTrue(is_positive_definite(v_minus))

    def test_collinear_pair_is_degenerate(self):
        base = np.random.default_rng(4).normal(size=60)
        cov = sample_covariance(np.column_stack((base, 2.0 * base)), 3)
        system = levinson(cov, 3)
        self.assertTrue(system.degenerate)
        self.assertEqual(system.degenerate_order, 0)
        with self.assertRaises(DegenerateWindowError):
            extract_pieces(np.column_stack((base, 2.0 * base)), system)

    def test_order_beyond_covariance(self):
        cov = sample_covariance(np.random.default_rng(5).normal(size=(40, 2)), 2)
        with self.assertRaises(ValidationError):
            levinson(cov, 3)


class TestWhitening(BaseTraderTest):
    def test_factor_reproduces_covariance(self):
        v = np.array([[2.0, 0.6], [0.6, 1.5]])
        w = whitening_factor(v)
        self.assertEqual(w[0, 1], 0.0)
        np.testing.assert_allclose(w @ w.T, v)

    def test_non_positive_definite_rejected(self):
        with self.assertRaises(DegenerateWindowError):
            whitening_factor(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with self.assertRaises(DegenerateWindowError):
            whitening_factor(np.array([[-1.0, 0.0], [0.0, 1.0]]))

    def test_piece_layout(self):
        values = np.random.default_rng(6).normal(size=(101, 2))
        order = 14
        system = levinson(sample_covariance(values, order), order)
        pieces = extract_pieces(values, system)
        self.assertEqual(pieces.count, 101 - order)
        self.assertEqual(pieces.nu.shape, (87, 15, 2))
        self.assertEqual(pieces.xi.shape, (87, 30))

        z = standardize(values)
        # first step of every piece is the raw value whitened by V_plus(0)
        np.testing.assert_allclose(pieces.nu[:, 0, :], z[:87])
        w0 = whitening_factor(system.v_plus[0])
        np.testing.assert_allclose(pieces.xi[0, :2], np.linalg.solve(w0, z[0]))

    def test_fluctuation_formula(self):
        values = np.random.default_rng(8).normal(size=(40, 2))
        order = 3
        system = levinson(sample_covariance(values, order), order)
        pieces = extract_pieces(values, system)
        z = standardize(values)
        piece = 5
        n = 3
        expected = z[piece + n] + sum(system.gamma_plus[n][k] @ z[piece + k] for k in range(n))
        np.testing.assert_allclose(pieces.nu[piece, n], expected)

    def test_whitened_white_noise_is_near_unit(self):
        values = np.random.default_rng(10).normal(size=(2000, 2))
        system = levinson(sample_covariance(values, 5), 5)
        xi = extract_pieces(values, system).xi
        self.assertAlmostEqual(float(np.mean(xi**2)), 1.0, delta=0.05)
        self.assertAlmostEqual(float(np.mean(xi)), 0.0, delta=0.05)


if __name__ == "__main__":
    unittest.main()
