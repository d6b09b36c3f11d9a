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
Visualization Plugin for KM2O Trader.
PNG charts of regimes and equity curves.
"""

from typing import Any, Dict, List

from km2o_trader.plugins.base_plugin import BasePlugin


class VisualizationPlugin(BasePlugin):
    """Plugin for charts of classification and backtest outputs"""

    def get_info(self) -> Dict[str, Any]:
        """Get plugin information"""
        return {
            "name": "visualization",
            "display_name": "Visualization",
            "description": "Price and lambda chart with regime shading, equity curve chart",
            "version": "0.1.0",
            "dependencies": ["matplotlib", "pandas"],
        }

    def get_tools(self) -> List[str]:
        """Get list of tools provided by this plugin"""
        return ["plot"]

    def on_enable(self) -> None:
        """Called when plugin is enabled"""
        super().on_enable()
        self._setup_matplotlib_backend()

    def _setup_matplotlib_backend(self):
        """Non-interactive backend for headless runs"""
        try:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt

            plt.ioff()
            self.logger.debug("Matplotlib backend configured")
        except Exception as e:
            self.logger.warning(f"Failed to configure matplotlib: {str(e)}")
