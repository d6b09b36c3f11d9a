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
Base class for all plugins in KM2O Trader.
Provides interface for plugin discovery, validation, and lifecycle management.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple

from km2o_trader.utils.logger import get_logger


class BasePlugin(ABC):
    """
    Base class for all plugins.

    A plugin groups the CLI commands of one concern (market data, stationarity,
    trading, visualization) and declares:
    - Plugin information (name, version, description)
    - Tool module names under its `tools` package
    - Environment validation
    - An enable hook
    """

    def __init__(self):
        self.logger = get_logger(self.__class__.__module__.replace("km2o_trader.", "", 1))

    @abstractmethod
    def get_info(self) -> Dict[str, Any]:
        """
        Get plugin information.

        Returns:
            Dict containing plugin metadata:
            {
                'name': str,              # Unique plugin identifier
                'display_name': str,      # Human-readable name
                'description': str,       # Plugin description
                'version': str,           # Plugin version
                'dependencies': List[str] # Required Python packages
            }
        """
        pass

    @abstractmethod
    def get_tools(self) -> List[str]:
        """
        Get list of tool module names provided by this plugin.

        Returns:
            Module names under the plugin's tools package
        """
        pass

    def validate_environment(self) -> Tuple[bool, Optional[str]]:
        """
        Validate that the environment meets plugin requirements.

        Returns:
            Tuple of (can_enable, error_message)
        """
        return self._check_dependencies(self.get_info().get("dependencies", []))

    def on_enable(self) -> None:
        """Hook called when plugin is enabled"""
        self.logger.debug(f"Plugin {self.get_info()['name']} enabled")

    def _check_dependencies(self, dependencies: List[str]) -> Tuple[bool, Optional[str]]:
        """
        Helper method to check if dependencies are installed.

        Returns:
            Tuple of (all_installed, missing_packages)
        """
        missing = []

        for dep in dependencies:
            try:
                __import__(dep)
            except ImportError:
                missing.append(dep)

        if missing:
            return False, f"Missing dependencies: {', '.join(missing)}"

        return True, None
