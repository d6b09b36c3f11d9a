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
Test suite for the km2o-trader command line
"""

import io
import json
import unittest
from contextlib import redirect_stdout
from pathlib import Path

import pandas as pd

from km2o_trader.cli import build_parser, config_overrides, main
from km2o_trader.core.constants import (
    CLASSIFICATION_FILE,
    CLASSIFICATION_SUMMARY_FILE,
    DEBUG_DIR,
    EQUITY_FILE,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    REGIME_INTERMEDIATE,
    REPORT_FILE,
    SWEEP_FILE,
    TRADES_FILE,
)
from km2o_trader.tests.base_test import BaseTraderTest


class TestCommandLine(BaseTraderTest):
    def invoke(self, *argv):
        """Exit status and parsed stdout (None when nothing was printed)"""
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            status = main([str(arg) for arg in argv])
        text = buffer.getvalue()
        return status, (json.loads(text) if text else None)

    def test_synth(self):
        target = self.path("walk.csv")
        status, result = self.invoke("synth", "--length", 50, "--seed", 3, "--output", target)
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(result["outputs"], [str(target)])
        self.assertEqual(result["days"], 50)
        self.assertEqual(len(pd.read_csv(target)), 50)

    def test_synth_is_deterministic(self):
        first, second = self.path("a.csv"), self.path("b.csv")
        self.invoke("synth", "--kind", "variance-switch", "--length", 80, "--switch-day", 40, "--output", first)
        self.invoke("synth", "--kind", "variance-switch", "--length", 80, "--switch-day", 40, "--output", second)
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_synth_default_target(self):
        status, result = self.invoke("synth", "--length", 10, "--output-dir", self.work_dir)
        self.assertEqual(status, EXIT_OK)
        self.assertTrue(self.path("synthetic.csv").is_file())

    def test_usage_errors(self):
        self.assertEqual(self.invoke("synth", "--bogus", 1)[0], EXIT_VALIDATION)
        self.assertEqual(self.invoke("frobnicate")[0], EXIT_VALIDATION)
        self.assertEqual(self.invoke()[0], EXIT_VALIDATION)
        self.assertEqual(self.invoke("backtest", "--mode", "hold")[0], EXIT_VALIDATION)

    def test_invalid_values(self):
        prices = self.write_prices(self.synth_prices(length=40))
        self.assertEqual(self.invoke("classify", "--input", prices, "--alpha", 1.5)[0], EXIT_VALIDATION)
        self.assertEqual(self.invoke("classify", "--input", prices, "--alpha", "abc")[0], EXIT_VALIDATION)
        self.assertEqual(self.invoke("classify", "--input", prices, "--window", 10)[0], EXIT_VALIDATION)
        self.assertEqual(
            self.invoke("classify", "--input", prices, "--lambda1", 0.3, "--lambda2", 0.5)[0], EXIT_VALIDATION
        )
        self.assertEqual(self.invoke("backtest", "--input", prices, "--npsy", 4)[0], EXIT_VALIDATION)

    def test_io_errors(self):
        missing = self.path("missing.csv")
        self.assertEqual(self.invoke("classify", "--input", missing)[0], EXIT_IO)
        self.assertEqual(self.invoke("synth", "--config", self.path("missing.env"))[0], EXIT_IO)

    def test_series_too_short(self):
        prices = self.write_prices(self.synth_prices(length=30))
        status, result = self.invoke("classify", "--input", prices, "--window", 40, "--output-dir", self.work_dir)
        self.assertEqual(status, EXIT_VALIDATION)
        self.assertIsNone(result)

    def test_classify_small_window(self):
        prices = self.write_prices(self.synth_prices(length=60, seed=1))
        status, result = self.invoke(
            "classify", "--input", prices, "--window", 20, "--output-dir", self.work_dir, "--debug-dump"
        )
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(result["days"], 39)
        table = pd.read_csv(self.path(CLASSIFICATION_FILE))
        self.assertEqual(list(table.columns), ["date", "lambda", "regime"])
        self.assertEqual(len(table), 39)
        summary = self.read_json(self.path("classification_summary.json"))
        self.assertEqual(summary["window"], 20)
        self.assertEqual(summary["classified_days"], 39)
        self.assertTrue((self.work_dir / "debug").is_dir())
        self.assertEqual(len(list((self.work_dir / "debug").glob("pairs_*.csv"))), 1)

    def test_classify_rejects_bad_dump_day_before_writing(self):
        prices = self.synth_prices(length=60, seed=1)
        path = self.write_prices(prices)
        for day in ("1999-01-04", prices.dates[5].strftime("%Y-%m-%d"), "not-a-date"):
            status, _ = self.invoke(
                "classify", "--input", path, "--window", 20, "--output-dir", self.work_dir,
                "--debug-dump", "--day", day,
            )
            self.assertEqual(status, EXIT_VALIDATION, day)
            self.assertFalse(self.path(CLASSIFICATION_FILE).exists())
            self.assertFalse(self.path(CLASSIFICATION_SUMMARY_FILE).exists())
            self.assertFalse((self.work_dir / DEBUG_DIR).exists())

    def outputs_of(self, *argv):
        """Bytes of every file a successful run reports as written"""
        status, result = self.invoke(*argv)
        self.assertEqual(status, EXIT_OK)
        return {name: Path(name).read_bytes() for name in result["outputs"]}

    def test_classify_is_reproducible(self):
        path = self.write_prices(self.synth_prices(length=60, seed=6))
        argv = ("classify", "--input", path, "--window", 20, "--output-dir", self.work_dir, "--debug-dump")
        first = self.outputs_of(*argv)
        self.assertEqual(len(first), 4)
        self.assertEqual(self.outputs_of(*argv), first)
        self.assertEqual(self.outputs_of(*argv, "--workers", 2), first)

    def test_backtest_is_reproducible(self):
        path = self.write_prices(self.synth_prices(length=80, seed=7))
        argv = ("backtest", "--input", path, "--window", 20, "--nma", 5, "--npsy", 3, "--output-dir", self.work_dir)
        first = self.outputs_of(*argv)
        self.assertIn(str(self.path(REPORT_FILE)), first)
        self.assertIn(str(self.path(EQUITY_FILE)), first)
        self.assertIn(str(self.path(TRADES_FILE)), first)
        self.assertEqual(self.outputs_of(*argv), first)

    def test_sweep_is_reproducible_across_workers(self):
        path = self.write_prices(self.synth_prices(length=80, seed=8))
        argv = (
            "sweep", "--input", path, "--window", 20, "--nma-min", 5, "--nma-max", 8, "--npsy-set", "3,5",
            "--output-dir", self.work_dir,
        )
        first = self.outputs_of(*argv)
        self.assertEqual(list(first), [str(self.path(SWEEP_FILE))])
        self.assertEqual(self.outputs_of(*argv), first)
        self.assertEqual(self.outputs_of(*argv, "--workers", 3), first)

    def test_transform_pair_dump(self):
        prices = self.synth_prices(length=40, seed=2)
        path = self.write_prices(prices)
        day = prices.dates[30].strftime("%Y-%m-%d")
        status, result = self.invoke(
            "transform", "--input", path, "--window", 20, "--pair", "0,18", "--day", day, "--output-dir", self.work_dir
        )
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(result["returns"], 39)
        dump = pd.read_csv(self.path(f"pair_0_18_{day}.csv"))
        self.assertEqual(list(dump.columns), ["n", "x_i", "x_j"])
        self.assertEqual(len(dump), 17)

        status, _ = self.invoke("transform", "--input", path, "--pair", "0,18", "--output-dir", self.work_dir)
        self.assertEqual(status, EXIT_VALIDATION)

    def test_backtest_with_intermediate_regimes(self):
        prices = self.synth_prices(length=80, seed=4)
        price_path = self.write_prices(prices)
        regimes = self.write_regimes(prices, [REGIME_INTERMEDIATE] * 80)
        status, result = self.invoke(
            "backtest", "--input", price_path, "--regimes", regimes, "--output-dir", self.work_dir
        )
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(result["n_trade"], 0)
        self.assertEqual(result["profit_factor"], 0.0)
        report = self.read_json(self.path(REPORT_FILE))
        self.assertEqual(report["params"]["regime_source"], "file")
        self.assertEqual(report["open_position"], "flat")

    def test_precedence(self):
        prices = self.synth_prices(length=80, seed=4)
        price_path = self.write_prices(prices)
        regimes = self.write_regimes(prices, [REGIME_INTERMEDIATE] * 80)
        config = self.write_text("run.env", "n_ma=7\nn_psy=5\nmode=ma-only\n")

        status, _ = self.invoke(
            "backtest", "--input", price_path, "--regimes", regimes, "--config", config, "--npsy", 3,
            "--output-dir", self.work_dir,
        )
        self.assertEqual(status, EXIT_OK)
        params = self.read_json(self.path(REPORT_FILE))["params"]
        self.assertEqual(params["n_ma"], 7)
        self.assertEqual(params["n_psy"], 3)
        self.assertEqual(params["mode"], "ma-only")

    def test_unknown_config_key(self):
        config = self.write_text("bad.env", "windw=50\n")
        self.assertEqual(self.invoke("synth", "--config", config)[0], EXIT_VALIDATION)

    def test_plot_equity(self):
        prices = self.synth_prices(length=80, seed=4)
        price_path = self.write_prices(prices)
        regimes = self.write_regimes(prices, [REGIME_INTERMEDIATE] * 80)
        self.invoke("backtest", "--input", price_path, "--regimes", regimes, "--output-dir", self.work_dir)

        status, result = self.invoke("plot", "--equity", self.path(EQUITY_FILE), "--output-dir", self.work_dir)
        self.assertEqual(status, EXIT_OK)
        self.assertTrue(self.path("equity.png").is_file())
        self.assertEqual(self.path("equity.png").read_bytes()[:4], b"\x89PNG")

    def test_plot_needs_something(self):
        self.assertEqual(self.invoke("plot", "--output-dir", self.work_dir)[0], EXIT_VALIDATION)


class TestParser(BaseTraderTest):
    def test_flags_map_to_fields(self):
        args = build_parser().parse_args(["sweep", "--input", "p.csv", "--nma", "6", "--npsy-set", "3,5"])
        overrides = config_overrides(args)
        self.assertEqual(overrides["n_ma"], 6)
        self.assertEqual(overrides["npsy_set"], [3, 5])
        self.assertNotIn("n_psy", overrides)
        self.assertNotIn("command", overrides)

    def test_switches(self):
        args = build_parser().parse_args(["backtest", "--allow-even-psy"])
        self.assertIs(config_overrides(args)["allow_even_psy"], True)
        args = build_parser().parse_args(["backtest"])
        self.assertNotIn("allow_even_psy", config_overrides(args))


if __name__ == "__main__":
    unittest.main()
