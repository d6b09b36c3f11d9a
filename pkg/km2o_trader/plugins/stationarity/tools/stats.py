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
Distribution and regime statistics tool: excess kurtosis of returns overall
and on stationary days, regime fractions, and Test(ABN) spans compared with
the proposed classification.
"""

from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import REGIME_STATIONARY, STATS_FILE
from km2o_trader.core.exceptions import ValidationError
from km2o_trader.plugins.market_data.utils.prices import load_csv
from km2o_trader.plugins.market_data.utils.reports import write_report
from km2o_trader.plugins.stationarity.utils.classifier import (
    abn_baseline,
    abn_contained,
    classify,
    compute_rates,
    excess_kurtosis,
    regime_fractions,
)
from km2o_trader.plugins.stationarity.utils.transforms import to_ccr


class Stats(BaseTool):
    def __init__(self):
        super().__init__()
        self.name = "stats"
        self.description = "Kurtosis, regime fractions and Test(ABN) containment summary"
        self.inputSchema = {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Price CSV with date,close columns"},
                "window": {"type": "integer"},
                "alpha": {"type": "number"},
                "lambda1": {"type": "number"},
                "lambda2": {"type": "number"},
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
        regimes = classify(rates.lambdas(config.alpha), config.lambda1, config.lambda2)
        stationary = ccr.values[rates.ccr_index[regimes.labels == REGIME_STATIONARY]]

        spans = abn_baseline(rates.lambdas(1.0))
        contained = abn_contained(spans, regimes)

        record = {
            "days": len(regimes),
            "alpha": config.alpha,
            "kurtosis": {
                "all": self._kurtosis(ccr.values, "all returns"),
                "stationary": self._kurtosis(stationary, "stationary-day returns"),
            },
            "fractions": regime_fractions(regimes),
            "abn": {
                "n_spans": len(spans),
                "span_days": int(sum(span.days for span in spans)),
                "all_contained": bool(all(contained)),
                "spans": [
                    {
                        "start_date": span.start_date,
                        "end_date": span.end_date,
                        "days": span.days,
                        "contained": inside,
                    }
                    for span, inside in zip(spans, contained)
                ],
            },
        }
        if not all(contained):
            self.logger.info(f"{contained.count(False)} of {len(spans)} Test(ABN) spans reach stationary days")

        path = write_report(record, "json", Path(config.output_dir) / STATS_FILE)
        return {"outputs": [str(path)], "kurtosis": record["kurtosis"], "fractions": record["fractions"]}

    def _kurtosis(self, values: np.ndarray, what: str) -> Optional[float]:
        try:
            return excess_kurtosis(values)
        except ValidationError as e:
            self.logger.warning(f"Kurtosis of {what} not reported: {e}")
            return None
