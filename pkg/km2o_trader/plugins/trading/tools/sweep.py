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
Parameter sweep tool.
"""

from pathlib import Path
from typing import Any, Dict

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import SWEEP_FILE
from km2o_trader.plugins.market_data.utils.prices import load_csv
from km2o_trader.plugins.market_data.utils.reports import write_report
from km2o_trader.plugins.trading.utils.regimes import resolve_regimes
from km2o_trader.plugins.trading.utils.sweep import sweep


class Sweep(BaseTool):
    """Ranked sweep.csv (n_ma,n_psy,n_trade,profit,pf,mdd) over nma_min..nma_max x npsy_set"""

    def __init__(self):
        super().__init__()
        self.name = "sweep"
        self.description = "Backtest every (n_ma, n_psy) combination and rank by profit"
        self.inputSchema = {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Price CSV with date,close columns"},
                "regimes": {"type": "string", "description": "Optional date,regime CSV overriding the classifier"},
                "nma_min": {"type": "integer"},
                "nma_max": {"type": "integer"},
                "npsy_set": {"type": "array", "items": {"type": "integer"}},
                "mode": {"type": "string", "enum": ["full", "rule2-only", "ma-only"]},
                "workers": {"type": "integer"},
            },
            "required": ["input"],
        }

    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        config = self.get_config(arguments)

        prices = load_csv(config.input)
        regimes, source = resolve_regimes(prices, config)
        table = sweep(
            prices,
            regimes,
            range(config.nma_min, config.nma_max + 1),
            config.npsy_set,
            mode=config.mode,
            allow_even_psy=config.allow_even_psy,
            workers=config.workers,
        )

        path = write_report(table, "csv", Path(config.output_dir) / SWEEP_FILE)
        best = table.iloc[0]
        return {
            "outputs": [str(path)],
            "combinations": len(table),
            "regime_source": source,
            "best": {"n_ma": int(best["n_ma"]), "n_psy": int(best["n_psy"]), "profit": float(best["profit"])},
        }
