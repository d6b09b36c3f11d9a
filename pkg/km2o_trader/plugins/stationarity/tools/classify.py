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
Regime classification tool.
"""

from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import CLASSIFICATION_FILE, CLASSIFICATION_SUMMARY_FILE, DEBUG_DIR
from km2o_trader.core.exceptions import DegenerateWindowError
from km2o_trader.plugins.market_data.utils.prices import load_csv
from km2o_trader.plugins.market_data.utils.reports import write_report
from km2o_trader.plugins.stationarity.utils.classifier import (
    classify,
    compute_rates,
    day_detail,
    regime_fractions,
)
from km2o_trader.plugins.stationarity.utils.transforms import CcrSeries, index_of, to_ccr
from km2o_trader.utils.config_reader import RunConfig


class Classify(BaseTool):
    """
    Per-day lambda and regime label for every classifiable day.

    Writes classification.csv (date,lambda,regime; empty lambda on degenerate
    days) and classification_summary.json. With debug_dump, the per-pair and
    per-piece outcomes of `day` (default: last classifiable day) go to debug/.
    """

    def __init__(self):
        super().__init__()
        self.name = "classify"
        self.description = "Classify each day as stationary, intermediate or non-stationary from Test(S) lambda"
        self.inputSchema = {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Price CSV with date,close columns"},
                "window": {"type": "integer", "description": "Window length N (default 100)"},
                "alpha": {"type": "number", "description": "Rate relaxation in (0, 1]"},
                "lambda1": {"type": "number", "description": "Stationary threshold"},
                "lambda2": {"type": "number", "description": "Non-stationary threshold"},
                "orthogonality": {"type": "string", "enum": ["sum", "literal"]},
                "workers": {"type": "integer", "description": "Worker processes for per-day analysis"},
                "debug_dump": {"type": "boolean", "description": "Dump pair and piece outcomes of one day"},
                "day": {"type": "string", "description": "Price date of the dumped day (default: last)"},
            },
            "required": ["input"],
        }

    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        config = self.get_config(arguments)
        output_dir = Path(config.output_dir)

        ccr = to_ccr(load_csv(config.input))
        # a bad dump day fails the run before any file is written
        dumps = self._debug_frames(ccr, config) if config.debug_dump else []
        rates = compute_rates(
            ccr, config.window, mode=config.orthogonality, budget=config.lag_budget, workers=config.workers
        )
        lambdas = rates.lambdas(config.alpha)
        regimes = classify(lambdas, config.lambda1, config.lambda2)

        frame = pd.DataFrame({"date": lambdas.dates, "lambda": lambdas.values, "regime": regimes.labels})
        classified = ~lambdas.degenerate
        summary = {
            "days": len(lambdas),
            "classified_days": int(classified.sum()),
            "unclassifiable_days": int(lambdas.degenerate.sum()),
            "first_date": lambdas.dates[0],
            "last_date": lambdas.dates[-1],
            "window": config.window,
            "alpha": config.alpha,
            "lambda1": config.lambda1,
            "lambda2": config.lambda2,
            "orthogonality": config.orthogonality,
            "mean_lambda": float(np.mean(lambdas.values[classified])) if classified.any() else None,
            "fractions": regime_fractions(regimes),
        }

        outputs = [
            str(write_report(frame, "csv", output_dir / CLASSIFICATION_FILE)),
            str(write_report(summary, "json", output_dir / CLASSIFICATION_SUMMARY_FILE)),
        ]
        outputs.extend(str(write_report(dump, "csv", output_dir / DEBUG_DIR / name)) for name, dump in dumps)

        return {"outputs": outputs, "days": summary["days"], "fractions": summary["fractions"]}

    def _debug_frames(self, ccr: CcrSeries, config: RunConfig) -> List[Tuple[str, pd.DataFrame]]:
        """(file name, table) pairs for the pair and piece dumps of `day`; empty on a degenerate window"""
        i = index_of(ccr, config.day) if config.day else len(ccr) - 1
        stamp = ccr.dates[i].strftime("%Y-%m-%d")
        try:
            pairs, pieces = day_detail(
                ccr, i, config.window, config.alpha, mode=config.orthogonality, budget=config.lag_budget
            )
        except DegenerateWindowError:
            self.logger.warning(f"No debug dump for {stamp}: window is degenerate")
            return []

        return [(f"pairs_{stamp}.csv", pairs), (f"pieces_{stamp}.csv", pieces)]
