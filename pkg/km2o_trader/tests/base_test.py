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
Base test class for KM2O Trader tests
Provides a scratch directory, price builders and response assertions
"""

import json
import os
import tempfile
import unittest
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from km2o_trader.core.constants import CALIBRATION_ENV_VAR
from km2o_trader.core.tool_registry import get_tool_registry
from km2o_trader.plugins.market_data.utils.prices import PriceSeries, write_prices_csv
from km2o_trader.plugins.market_data.utils.synth import SynthSpec, generate

TEST_START_DATE = "2020-01-06"


class BaseTraderTest(unittest.TestCase):
    """Base test class with common setup and utilities"""

    def setUp(self):
        """Fresh scratch directory per test"""
        self._scratch = tempfile.TemporaryDirectory()
        self.work_dir = Path(self._scratch.name)

    def tearDown(self):
        self._scratch.cleanup()

    def path(self, name: str) -> Path:
        return self.work_dir / name

    def make_prices(self, closes: Sequence[float], start: str = TEST_START_DATE) -> PriceSeries:
        """Closes on consecutive weekdays"""
        return PriceSeries(dates=pd.bdate_range(start=start, periods=len(closes)), closes=np.asarray(closes, float))

    def synth_prices(self, kind: str = "gaussian-walk", length: int = 300, seed: int = 0, **params) -> PriceSeries:
        return generate(SynthSpec(kind=kind, length=length, seed=seed, **params))

    def write_prices(self, prices, name: str = "prices.csv") -> Path:
        """Write a PriceSeries (or plain closes) as date,close"""
        if not isinstance(prices, PriceSeries):
            prices = self.make_prices(prices)
        target = self.path(name)
        write_prices_csv(prices, target)
        return target

    def write_regimes(self, prices: PriceSeries, labels: Iterable[str], name: str = "regimes.csv") -> Path:
        target = self.path(name)
        pd.DataFrame({"date": prices.dates.strftime("%Y-%m-%d"), "regime": list(labels)}).to_csv(
            target, index=False, lineterminator="\n"
        )
        return target

    def write_text(self, name: str, text: str) -> Path:
        target = self.path(name)
        target.write_text(text, encoding="utf-8")
        return target

    def read_json(self, path) -> Any:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)

    def run_tool(self, tool_name: str, arguments: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Tool envelope ({success, result | error, error_type, ...}) with output_dir set to the scratch dir"""
        tool = get_tool_registry().get_tool(tool_name)
        self.assertIsNotNone(tool, f"Tool {tool_name} not registered")
        merged = {"output_dir": str(self.work_dir)}
        merged.update(arguments or {})
        return tool._safe_execute(merged)

    def require_calibration(self):
        """Skip long Monte Carlo calibrations unless explicitly requested"""
        if os.environ.get(CALIBRATION_ENV_VAR, "").strip() != "1":
            self.skipTest(f"Calibration run disabled (set {CALIBRATION_ENV_VAR}=1)")

    def assert_success_response(self, response):
        """Assert that response indicates success"""
        self.assertIsInstance(response, dict)
        self.assertTrue(response.get("success"), f"Expected success=True, got: {response}")

    def assert_error_response(self, response, error_type: Optional[str] = None, error_message: Optional[str] = None):
        """Assert that response indicates error"""
        self.assertIsInstance(response, dict)
        self.assertFalse(response.get("success"), f"Expected success=False, got: {response}")
        self.assertIn("error", response)
        if error_type:
            self.assertEqual(response.get("error_type"), error_type)
        if error_message:
            self.assertIn(error_message, response["error"])

    def assert_has_fields(self, data: Dict[str, Any], fields: Iterable[str]):
        """Assert that data contains all required fields"""
        for field in fields:
            self.assertIn(field, data, f"Missing field: {field}")
