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
Backtest tool: one run of the three-rule strategy.
"""

from pathlib import Path
from typing import Any, Dict

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import EQUITY_FILE, REPORT_FILE, TRADES_FILE
from km2o_trader.plugins.market_data.utils.prices import load_csv
from km2o_trader.plugins.market_data.utils.reports import write_report
from km2o_trader.plugins.trading.utils.backtester import backtest
from km2o_trader.plugins.trading.utils.indicators import IndicatorParams
from km2o_trader.plugins.trading.utils.regimes import resolve_regimes


class Backtest(BaseTool):
    """
    Writes backtest_report.json, equity.csv and trades.csv.

    Regimes come from `regimes` (a date,regime file) when given, otherwise
    from the classifier selected by `regime_source`.
    """

    def __init__(self):
        super().__init__()
        self.name = "backtest"
        self.description = "Backtest the regime-switching moving-average / psychological-line strategy"
        self.inputSchema = {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Price CSV with date,close columns"},
                "regimes": {"type": "string", "description": "Optional date,regime CSV overriding the classifier"},
                "n_ma": {"type": "integer", "description": "Moving-average length"},
                "n_psy": {"type": "integer", "description": "Psychological-line length (odd)"},
                "mode": {"type": "string", "enum": ["full", "rule2-only", "ma-only"]},
                "regime_source": {"type": "string", "enum": ["proposed", "abn"]},
            },
            "required": ["input"],
        }

    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        config = self.get_config(arguments)
        output_dir = Path(config.output_dir)

        prices = load_csv(config.input)
        regimes, source = resolve_regimes(prices, config)
        params = IndicatorParams(n_ma=config.n_ma, n_psy=config.n_psy, allow_even_psy=config.allow_even_psy)

        result = backtest(prices, regimes, params, mode=config.mode)
        result.extra["regime_source"] = source
        report = result.report()

        outputs = [
            str(write_report(report, "json", output_dir / REPORT_FILE)),
            str(write_report(result.equity_frame(), "csv", output_dir / EQUITY_FILE)),
            str(write_report(result.trades_frame(), "csv", output_dir / TRADES_FILE)),
        ]
        return {
            "outputs": outputs,
            "n_trade": report["n_trade"],
            "profit": report["profit"],
            "profit_factor": report["profit_factor"],
            "max_drawdown": report["max_drawdown"],
        }
