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
Test suite for price loading, synthetic series and report writing
"""

import json
import math
import unittest

import numpy as np
import pandas as pd

from km2o_trader.core.exceptions import DataIOError, ValidationError
from km2o_trader.plugins.market_data.utils.prices import (
    PriceSeries,
    load_csv,
    load_regimes_csv,
    write_prices_csv,
)
from km2o_trader.plugins.market_data.utils.reports import format_float, to_json_safe, write_report
from km2o_trader.plugins.market_data.utils.synth import SynthSpec, daily_sigmas, generate
from km2o_trader.tests.base_test import BaseTraderTest


class TestPriceLoading(BaseTraderTest):
    def test_load_valid_file(self):
        path = self.write_text("p.csv", "date,close\n2020-01-06,100\n2020-01-07,101.5\n2020-01-08,99\n")
        prices = load_csv(path)
        self.assertEqual(len(prices), 3)
        np.testing.assert_allclose(prices.closes, [100.0, 101.5, 99.0])
        self.assertEqual(prices.dates[0], pd.Timestamp("2020-01-06"))

    def test_extra_columns_ignored(self):
        path = self.write_text("p.csv", "Date,Open,Close\n2020-01-06,1,100\n2020-01-07,1,101\n")
        self.assertEqual(list(load_csv(path).closes), [100.0, 101.0])

    def test_out_of_order_rows_sorted_with_warning(self):
        path = self.write_text("p.csv", "date,close\n2020-01-08,3\n2020-01-06,1\n2020-01-07,2\n")
        with self.assertLogs("km2o_trader", level="WARNING") as captured:
            prices = load_csv(path)
        self.assertEqual(list(prices.closes), [1.0, 2.0, 3.0])
        self.assertTrue(any("not in date order" in line for line in captured.output))

    def test_duplicate_date_names_line(self):
        path = self.write_text("p.csv", "date,close\n2020-01-06,1\n2020-01-06,2\n")
        with self.assertRaises(ValidationError) as context:
            load_csv(path)
        self.assertIn("Line 3", str(context.exception))

    def test_non_positive_close_rejected(self):
        path = self.write_text("p.csv", "date,close\n2020-01-06,1\n2020-01-07,0\n")
        with self.assertRaises(ValidationError) as context:
            load_csv(path)
        self.assertIn("Line 3", str(context.exception))

    def test_unparseable_values_rejected(self):
        bad_close = self.write_text("a.csv", "date,close\n2020-01-06,1\n2020-01-07,abc\n")
        bad_date = self.write_text("b.csv", "date,close\nnot-a-date,1\n2020-01-07,2\n")
        for path in (bad_close, bad_date):
            with self.assertRaises(ValidationError):
                load_csv(path)

    def test_missing_column_and_short_file(self):
        with self.assertRaises(ValidationError):
            load_csv(self.write_text("a.csv", "date,price\n2020-01-06,1\n2020-01-07,2\n"))
        with self.assertRaises(ValidationError):
            load_csv(self.write_text("b.csv", "date,close\n2020-01-06,1\n"))

    def test_missing_file_is_io_error(self):
        with self.assertRaises(DataIOError):
            load_csv(self.path("absent.csv"))

    def test_write_then_load_is_exact(self):
        prices = self.synth_prices(length=50, seed=11)
        path = self.path("round.csv")
        write_prices_csv(prices, path)
        self.assertEqual(load_csv(path), prices)

    def test_price_series_invariants(self):
        dates = pd.bdate_range("2020-01-06", periods=3)
        with self.assertRaises(ValidationError):
            PriceSeries(dates=dates, closes=[1.0, -1.0, 2.0])
        with self.assertRaises(ValidationError):
            PriceSeries(dates=dates[::-1], closes=[1.0, 2.0, 3.0])
        with self.assertRaises(ValidationError):
            PriceSeries(dates=dates[:1], closes=[1.0])


class TestRegimeFile(BaseTraderTest):
    def test_labels_aligned_to_prices(self):
        prices = self.make_prices([1, 2, 3])
        path = self.write_regimes(prices, ["stationary", "intermediate", "non-stationary"])
        labels = load_regimes_csv(path, prices)
        self.assertEqual(list(labels), ["stationary", "intermediate", "non-stationary"])

    def test_uncovered_price_date_rejected(self):
        prices = self.make_prices([1, 2, 3])
        path = self.write_regimes(prices.prefix(2), ["stationary", "stationary"])
        with self.assertRaises(ValidationError):
            load_regimes_csv(path, prices)

    def test_unknown_label_rejected(self):
        prices = self.make_prices([1, 2])
        path = self.write_regimes(prices, ["stationary", "bullish"])
        with self.assertRaises(ValidationError):
            load_regimes_csv(path, prices)


class TestSynth(BaseTraderTest):
    def test_same_seed_same_series(self):
        spec = SynthSpec(kind="gaussian-walk", length=200, seed=5)
        self.assertEqual(generate(spec), generate(spec))
        other = generate(SynthSpec(kind="gaussian-walk", length=200, seed=6))
        self.assertFalse(np.array_equal(generate(spec).closes, other.closes))

    def test_weekday_calendar_and_start_price(self):
        prices = generate(SynthSpec(kind="gaussian-walk", length=30, seed=1, start_price=500.0))
        self.assertEqual(len(prices), 30)
        self.assertTrue((prices.dates.dayofweek < 5).all())
        self.assertEqual(prices.closes[0], 500.0)

    def test_zero_sigma_gives_constant_series(self):
        prices = generate(SynthSpec(kind="gaussian-walk", length=10, sigma=0.0))
        np.testing.assert_allclose(prices.closes, 10000.0)

    def test_variance_switch_sigmas(self):
        spec = SynthSpec(kind="variance-switch", length=6, sigma_before=0.01, sigma_after=0.05, switch_day=3)
        np.testing.assert_allclose(daily_sigmas(spec), [0.01, 0.01, 0.05, 0.05, 0.05])

    def test_variance_switch_raises_volatility(self):
        prices = generate(
            SynthSpec(kind="variance-switch", length=2000, seed=2, sigma_before=0.01, sigma_after=0.05, switch_day=1000)
        )
        returns = np.diff(np.log(prices.closes))
        self.assertGreater(returns[1000:].std(), 3 * returns[:998].std())

    def test_invalid_specs(self):
        with self.assertRaises(ValidationError):
            SynthSpec(kind="variance-switch", length=10, switch_day=10)
        with self.assertRaises(ValidationError):
            SynthSpec(kind="variance-switch", length=10, switch_day=5, sigma_after=0.0)
        with self.assertRaises(ValidationError):
            SynthSpec(kind="brownian-bridge", length=10)
        with self.assertRaises(ValidationError):
            SynthSpec(kind="gaussian-walk", length=1)


class TestReports(BaseTraderTest):
    def test_format_float(self):
        self.assertEqual(format_float(1.0 / 3.0), "0.333333")
        self.assertEqual(format_float(math.inf), "inf")
        self.assertEqual(format_float(math.nan), "")

    def test_json_keeps_key_order_and_rounds(self):
        record = {"zeta": 1.23456789, "alpha": math.inf, "count": np.int64(3), "nested": {"b": 2.0, "a": np.nan}}
        path = write_report(record, "json", self.path("r.json"))
        text = path.read_text(encoding="utf-8")
        self.assertTrue(text.endswith("}\n"))
        loaded = json.loads(text)
        self.assertEqual(list(loaded), ["zeta", "alpha", "count", "nested"])
        self.assertEqual(loaded["zeta"], 1.234568)
        self.assertEqual(loaded["alpha"], "inf")
        self.assertEqual(loaded["count"], 3)
        self.assertIsNone(loaded["nested"]["a"])

    def test_csv_float_format_and_line_endings(self):
        frame = pd.DataFrame({"date": pd.bdate_range("2020-01-06", periods=2), "pf": [0.5, math.inf]})
        path = write_report(frame, "csv", self.path("r.csv"))
        content = path.read_bytes()
        self.assertNotIn(b"\r\n", content)
        self.assertEqual(content.decode().splitlines(), ["date,pf", "2020-01-06,0.500000", "2020-01-07,inf"])

    def test_unknown_format_rejected(self):
        with self.assertRaises(ValidationError):
            write_report({}, "xml", self.path("r.xml"))

    def test_to_json_safe_negative_zero(self):
        self.assertEqual(to_json_safe(-1e-9), 0.0)


if __name__ == "__main__":
    unittest.main()
