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
Stationarity Plugin for KM2O Trader.
KM2O-Langevin Test(S) analysis of daily returns and regime classification.
"""

from typing import Any, Dict, List

from km2o_trader.plugins.base_plugin import BasePlugin


class StationarityPlugin(BasePlugin):
    """
    Plugin for stationarity analysis.

    Provides tools for:
    - Daily log-return conversion and pair-series dumps
    - Per-day lambda and regime labels
    - Kurtosis, regime fractions and Test(ABN) comparison
    - Rate of lambda = 1 across alpha values
    """

    def get_info(self) -> Dict[str, Any]:
        """Get plugin information"""
        return {
            "name": "stationarity",
            "display_name": "Stationarity Analysis",
            "description": "Windowed Test(S) stationarity parameter and regime classification",
            "version": "0.1.0",
            "dependencies": ["numpy", "pandas", "scipy"],
        }

    def get_tools(self) -> List[str]:
        """Get list of tools provided by this plugin"""
        return ["transform", "classify", "stats", "alpha_sweep"]
