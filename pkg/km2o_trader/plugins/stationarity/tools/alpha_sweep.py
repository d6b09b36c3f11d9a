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
Rate of days with lambda = 1 as the relaxation alpha varies.
"""

from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import ALPHA_SWEEP_FILE
from km2o_trader.plugins.market_data.utils.prices import load_csv
from km2o_trader.plugins.market_data.utils.reports import write_report
from km2o_trader.plugins.stationarity.utils.classifier import RateTable, compute_rates
from km2o_trader.plugins.stationarity.utils.transforms import to_ccr


def rate_lambda_one(rates: RateTable, alpha: float) -> float:
    """Share of classifiable days whose lambda equals 1 at alpha"""
    lambdas = rates.lambdas(alpha)
    classified = ~lambdas.degenerate
    if not classified.any():
        return 0.0
    return float(np.mean(lambdas.values[classified] == 1.0))


class AlphaSweep(BaseTool):
    """Writes alpha_sweep.csv (alpha,rate_lambda_one); rates are computed once for all alphas"""

    def __init__(self):
        super().__init__()
        self.name = "alpha_sweep"
        self.description = "Rate of days with lambda = 1 for each alpha of a grid"
        self.inputSchema = {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Price CSV with date,close columns"},
                "alphas": {
                    "type": "array",
                    "items": {"type": "number"},
                    "description": "Alpha grid (default 0.05..1.00 step 0.05)",
                },
                "window": {"type": "integer"},
                "orthogonality": {"type": "string", "enum": ["sum", "literal"]},
                "workers": {"type": "integer"},
            },
            "required": ["input"],
        }

    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        config = self.get_config(arguments)

        ccr = to_ccr(load_csv(config.input))
        rates = compute_rates(
            ccr, config.window, mode=config.orthogonality, budget=config.lag_budget, workers=config.workers
        )
        alphas = sorted(set(config.alphas))
        frame = pd.DataFrame(
            {"alpha": [float(a) for a in alphas], "rate_lambda_one": [rate_lambda_one(rates, a) for a in alphas]}
        )

        path = write_report(frame, "csv", Path(config.output_dir) / ALPHA_SWEEP_FILE)
        return {"outputs": [str(path)], "alphas": len(alphas)}
