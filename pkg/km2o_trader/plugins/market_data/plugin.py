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
Market Data Plugin for KM2O Trader.
Price loading, synthetic series and report writing.
"""

from typing import Any, Dict, List

from km2o_trader.plugins.base_plugin import BasePlugin


class MarketDataPlugin(BasePlugin):
    """
    Plugin for price data.

    Provides tools for:
    - Synthetic price series with known stationarity properties
    """

    def get_info(self) -> Dict[str, Any]:
        """Get plugin information"""
        return {
            "name": "market_data",
            "display_name": "Market Data",
            "description": "Price CSV loading, synthetic series generation and report writing",
            "version": "0.1.0",
            "dependencies": ["numpy", "pandas"],
        }

    def get_tools(self) -> List[str]:
        """Get list of tools provided by this plugin"""
        return ["synth"]
