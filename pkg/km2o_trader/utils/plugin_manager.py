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
Plugin management: every package under km2o_trader/plugins with a plugin.py
is a plugin, and every module its plugin lists under tools/ holds one command.
"""

import importlib
import inspect
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Set

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.exceptions import TraderError
from km2o_trader.plugins.base_plugin import BasePlugin
from km2o_trader.utils.logger import get_logger

PLUGIN_PACKAGE = "km2o_trader.plugins"
PLUGINS_DIRECTORY = Path(__file__).parent.parent / "plugins"
PLUGIN_MODULE = "plugin"


class PluginError(TraderError):
    """Base plugin exception"""

    pass


class PluginValidationError(PluginError):
    """Plugin environment or tool module failed validation"""

    pass


@dataclass
class PluginInfo:
    """A discovered plugin and the commands it declares"""

    name: str
    display_name: str
    instance: BasePlugin
    tools: List[str] = field(default_factory=list)
    enabled: bool = False


@dataclass
class ToolInfo:
    """A loaded command tool"""

    name: str
    plugin_name: str
    description: str
    instance: BaseTool


def discover_plugins(directory: Path = PLUGINS_DIRECTORY) -> Dict[str, PluginInfo]:
    """Plugins in directory-name order; a plugin that fails to import is logged and left out"""
    logger = get_logger("plugin_discovery")
    plugins: Dict[str, PluginInfo] = {}

    for plugin_dir in sorted(directory.iterdir()):
        if not plugin_dir.is_dir() or plugin_dir.name.startswith(("_", ".")):
            continue
        if not (plugin_dir / f"{PLUGIN_MODULE}.py").exists():
            continue
        try:
            info = _plugin_info(f"{PLUGIN_PACKAGE}.{plugin_dir.name}.{PLUGIN_MODULE}")
        except Exception as e:
            logger.error(f"Failed to discover plugin {plugin_dir.name}: {e}")
            continue
        if info is not None:
            plugins[info.name] = info

    return plugins


def _plugin_info(module_name: str) -> Optional[PluginInfo]:
    module = importlib.import_module(module_name)
    for attr in vars(module).values():
        if inspect.isclass(attr) and issubclass(attr, BasePlugin) and attr is not BasePlugin:
            plugin = attr()
            meta = plugin.get_info()
            return PluginInfo(
                name=meta["name"],
                display_name=meta.get("display_name", meta["name"].title()),
                instance=plugin,
                tools=plugin.get_tools(),
            )
    return None


def load_tool(plugin: PluginInfo, tool_module: str) -> BaseTool:
    """
    Instantiate the BaseTool defined in plugins/<plugin>/tools/<tool_module>.py.

    The tool's category is its plugin's display name.

    Raises:
        PluginValidationError: the module defines no tool class
    """
    module_name = f"{PLUGIN_PACKAGE}.{plugin.name}.tools.{tool_module}"
    module = importlib.import_module(module_name)
    for attr in vars(module).values():
        if (
            inspect.isclass(attr)
            and issubclass(attr, BaseTool)
            and attr is not BaseTool
            and attr.__module__ == module.__name__
        ):
            tool = attr()
            tool.category = plugin.display_name
            return tool
    raise PluginValidationError(f"No tool class found in {module_name}")


class PluginManager:
    """
    Enables every discovered plugin whose environment validates and loads its
    tools. A plugin with a missing dependency or a broken tool module is
    skipped with a warning, so the remaining commands keep working.
    """

    def __init__(self, directory: Path = PLUGINS_DIRECTORY):
        self.logger = get_logger("plugin_manager")
        self._plugins = discover_plugins(directory)
        self._tools: Dict[str, ToolInfo] = {}

        for plugin in self._plugins.values():
            try:
                self._tools.update(self._enable(plugin))
            except PluginError as e:
                self.logger.warning(str(e))

        self.logger.debug(
            f"Plugin manager initialized: {len(self._plugins)} discovered, "
            f"{len(self.get_enabled_plugins())} enabled, {len(self._tools)} tools loaded"
        )

    def _enable(self, plugin: PluginInfo) -> Dict[str, ToolInfo]:
        can_enable, error = plugin.instance.validate_environment()
        if not can_enable:
            raise PluginValidationError(f"Plugin '{plugin.name}' cannot be enabled: {error}")

        tools = {}
        for tool_module in plugin.tools:
            try:
                tool = load_tool(plugin, tool_module)
            except ImportError as e:
                raise PluginError(f"Failed to enable plugin '{plugin.name}': {e}")

            deps_valid, deps_error = tool.validate_dependencies()
            if not deps_valid:
                self.logger.warning(f"Tool {tool.name} dependency validation failed: {deps_error}")
                continue
            tools[tool.name] = ToolInfo(
                name=tool.name, plugin_name=plugin.name, description=tool.description, instance=tool
            )

        plugin.enabled = True
        plugin.instance.on_enable()
        self.logger.debug(f"Plugin '{plugin.name}' enabled with {len(tools)} tools")
        return tools

    def get_enabled_plugins(self) -> Set[str]:
        return {name for name, plugin in self._plugins.items() if plugin.enabled}

    def get_all_tools(self) -> Dict[str, ToolInfo]:
        """Tools of enabled plugins keyed by tool name"""
        return self._tools.copy()


_plugin_manager: Optional[PluginManager] = None


def get_plugin_manager() -> PluginManager:
    """Process-wide plugin manager, built on first use"""
    global _plugin_manager
    if _plugin_manager is None:
        _plugin_manager = PluginManager()
    return _plugin_manager
