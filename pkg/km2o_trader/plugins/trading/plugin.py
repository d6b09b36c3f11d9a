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
Trading Plugin for KM2O Trader.
Three-rule strategy backtests and parameter sweeps.
"""

from typing import Any, Dict, List

from km2o_trader.plugins.base_plugin import BasePlugin


class TradingPlugin(BasePlugin):
    """
    Plugin for strategy evaluation.

    Provides tools for:
    - Single backtest with report, equity curve and trade list
    - (n_ma, n_psy) grid sweeps ranked by profit
    """

    def get_info(self) -> Dict[str, Any]:
        """Get plugin information"""
        return {
            "name": "trading",
            "display_name": "Trading",
            "description": "Moving-average / psychological-line strategy driven by stationarity regimes",
            "version": "0.1.0",
            "dependencies": ["numpy", "pandas"],
        }

    def get_tools(self) -> List[str]:
        """Get list of tools provided by this plugin"""
        return ["backtest", "sweep"]
