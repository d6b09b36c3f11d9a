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
Base class for all KM2O Trader tools with configuration and dependency management.
"""

import json
import time
import traceback
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple

from km2o_trader.core.exceptions import DataIOError, ValidationError
from km2o_trader.utils.config_reader import RunConfig
from km2o_trader.utils.logger import get_logger
from km2o_trader.utils.validators import validate_tool_arguments


class BaseTool(ABC):
    """
    Base class for all KM2O Trader tools.

    Attributes:
        name: Tool identifier, the CLI command with hyphens replaced by underscores
        description: Human-readable description
        inputSchema: JSON schema for tool inputs
        category: Tool category for organization
        dependencies: List of required importable packages
        default_config: Tool-level defaults applied beneath the run configuration
    """

    def __init__(self):
        self.name: str = ""
        self.description: str = ""
        self.inputSchema: Dict[str, Any] = {"type": "object", "properties": {}}
        self.category: str = "Custom"
        self.dependencies: List[str] = []
        self.default_config: Dict[str, Any] = {}
        self.logger = get_logger(self.__class__.__module__.replace("km2o_trader.", "", 1))

    @abstractmethod
    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        """
        Execute the tool with given arguments.

        Args:
            arguments: RunConfig fields as a plain mapping

        Returns:
            Tool execution result (paths written and a short summary)

        Raises:
            ValidationError: If arguments are invalid
            DataIOError: If an input cannot be read or an output cannot be written
        """
        pass

    def validate_arguments(self, arguments: Dict[str, Any]) -> None:
        """
        Validate arguments against input schema.

        Raises:
            ValidationError: If validation fails
        """
        validate_tool_arguments(arguments, self.inputSchema)

    def get_config(self, arguments: Dict[str, Any]) -> RunConfig:
        """
        Effective configuration: tool defaults < supplied arguments.

        The CLI has already merged RunConfig defaults, the config file and flags
        into `arguments`; tool defaults only fill fields it left unset.
        """
        merged = self.default_config.copy()
        merged.update({key: value for key, value in arguments.items() if value is not None})
        return RunConfig.from_mapping(merged)

    def get_metadata(self) -> Dict[str, Any]:
        """Tool metadata for listing and debugging"""
        return {
            "name": self.name,
            "description": self.description,
            "class": self.__class__.__name__,
            "module": self.__class__.__module__,
            "category": self.category,
            "dependencies": self.dependencies,
            "inputSchema": self.inputSchema,
            "default_config": self.default_config,
        }

    def validate_dependencies(self) -> Tuple[bool, Optional[str]]:
        """
        Check if all tool dependencies are available.

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not self.dependencies:
            return True, None

        missing_deps = []
        for dep in self.dependencies:
            try:
                __import__(dep)
            except ImportError:
                missing_deps.append(dep)

        if missing_deps:
            return False, f"Missing dependencies: {', '.join(missing_deps)}"

        return True, None

    def _safe_execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        """
        Execute tool with error handling, timing, and execution logging.

        Returns:
            Envelope {success, result | error, error_type, execution_time}
        """
        start_time = time.time()

        try:
            deps_valid, deps_error = self.validate_dependencies()
            if not deps_valid:
                return {"success": False, "error": deps_error, "error_type": "DependencyError"}

            self.validate_arguments(arguments)

            result = self.execute(arguments)

            execution_time = time.time() - start_time
            response = {"success": True, "result": result, "execution_time": execution_time}
            self.log_execution(arguments, response, execution_time)
            self.logger.info(f"Successfully executed {self.name} in {execution_time:.3f}s")
            return response

        except ValidationError as e:
            return self._failure(arguments, e, "ValidationError", start_time)

        except DataIOError as e:
            return self._failure(arguments, e, "DataIOError", start_time)

        except Exception as e:
            response = self._failure(arguments, e, "ExecutionError", start_time)
            self.logger.error(
                f"Tool execution failed: {self.name} - {type(e).__name__}: {e}\n{traceback.format_exc()}"
            )
            return response

    def _failure(
        self, arguments: Dict[str, Any], error: Exception, error_type: str, start_time: float
    ) -> Dict[str, Any]:
        execution_time = time.time() - start_time
        response = {
            "success": False,
            "error": str(error),
            "error_type": error_type,
            "execution_time": execution_time,
        }
        self.log_execution(arguments, response, execution_time)
        return response

    def log_execution(self, arguments: Dict[str, Any], result: Dict[str, Any], execution_time: float):
        """Log tool execution at debug level with sanitized arguments"""
        if not self.logger.is_debug():
            return
        status = "ok" if result.get("success") else f"failed ({result.get('error_type')})"
        self.logger.debug(
            f"{self.name} {status} in {execution_time:.3f}s "
            f"arguments={json.dumps(self._sanitize_data(arguments), sort_keys=True)}"
        )

    def _sanitize_data(self, data: Any) -> Any:
        """JSON-safe copy of data for logging; long lists are truncated"""
        if isinstance(data, dict):
            return {str(key): self._sanitize_data(value) for key, value in data.items()}
        if isinstance(data, (list, tuple)):
            if len(data) > 10:
                return [self._sanitize_data(item) for item in data[:3]] + [f"... and {len(data) - 3} more items"]
            return [self._sanitize_data(item) for item in data]
        if isinstance(data, (str, int, float, bool, type(None))):
            return data
        return str(data)[:200]
