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
Tool registry that provides a simple interface to the plugin manager.
"""

from typing import Any, Dict, List, Optional

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.exceptions import DataIOError, TraderError, ValidationError
from km2o_trader.utils.logger import get_logger
from km2o_trader.utils.plugin_manager import get_plugin_manager


class ToolRegistry:
    """
    Simple tool registry that delegates to the plugin manager.
    """

    def __init__(self):
        self.logger = get_logger("tool_registry")

    @staticmethod
    def tool_name_for(command: str) -> str:
        """CLI commands use hyphens, tool names use underscores"""
        return command.replace("-", "_")

    def get_tool(self, tool_name: str) -> Optional[BaseTool]:
        """Get a tool by name"""
        tool_info = get_plugin_manager().get_all_tools().get(self.tool_name_for(tool_name))
        return tool_info.instance if tool_info else None

    def get_available_tools(self) -> List[Dict[str, Any]]:
        """Metadata of every loaded tool, sorted by name"""
        tools = get_plugin_manager().get_all_tools()
        return [tools[name].instance.get_metadata() for name in sorted(tools)]

    def execute_tool(self, tool_name: str, arguments: Dict[str, Any]) -> Any:
        """
        Execute a tool and return its result.

        Raises:
            ValidationError: unknown tool or invalid arguments
            DataIOError: unreadable input or unwritable output
            TraderError: any other failure
        """
        tool = self.get_tool(tool_name)
        if not tool:
            raise ValidationError(f"Tool '{tool_name}' not found")

        result = tool._safe_execute(arguments)

        if result.get("success"):
            return result.get("result")

        error_type = result.get("error_type", "ExecutionError")
        error_message = result.get("error", "Tool execution failed")

        if error_type == "ValidationError":
            raise ValidationError(error_message)
        elif error_type == "DataIOError":
            raise DataIOError(error_message)
        elif error_type == "DependencyError":
            raise TraderError(f"Dependency error: {error_message}")
        else:
            execution_time = result.get("execution_time", 0.0)
            raise TraderError(f"[{error_type}] {error_message} (execution_time: {execution_time:.3f}s)")

    def has_tool(self, tool_name: str) -> bool:
        """Check if a tool is available"""
        return self.get_tool(tool_name) is not None

    def get_stats(self) -> Dict[str, Any]:
        """Tool counts per plugin"""
        all_tools = get_plugin_manager().get_all_tools()
        by_plugin: Dict[str, List[str]] = {}
        for tool_info in all_tools.values():
            by_plugin.setdefault(tool_info.plugin_name, []).append(tool_info.name)

        return {
            "total_tools": len(all_tools),
            "tools_by_plugin": {name: sorted(tools) for name, tools in sorted(by_plugin.items())},
        }


# Global registry instance
_tool_registry: Optional[ToolRegistry] = None


def get_tool_registry() -> ToolRegistry:
    """Get or create global tool registry instance"""
    global _tool_registry
    if _tool_registry is None:
        _tool_registry = ToolRegistry()
    return _tool_registry
