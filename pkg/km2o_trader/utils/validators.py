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
Input validation utilities for KM2O Trader.
JSON-schema checks for tool arguments and run configuration.
"""

from typing import Any, Dict, Optional

from jsonschema import Draft7Validator

from km2o_trader.core.exceptions import ValidationError


def _field_name(error) -> str:
    if error.absolute_path:
        return ".".join(str(part) for part in error.absolute_path)
    # required / additionalProperties errors point at the parent object
    if error.validator == "required":
        return str(error.message.split("'")[1])
    if error.validator == "additionalProperties":
        return ", ".join(sorted(set(error.instance) - set(error.schema.get("properties", {}))))
    return "<root>"


def schema_errors(instance: Dict[str, Any], schema: Dict[str, Any]) -> list:
    """All schema violations, sorted by field path for stable messages"""
    validator = Draft7Validator(schema)
    return sorted(validator.iter_errors(instance), key=lambda e: [str(p) for p in e.absolute_path])


def validate_tool_arguments(arguments: Dict[str, Any], schema: Dict[str, Any]) -> None:
    """
    Validate tool arguments against JSON schema.

    Raises:
        ValidationError: naming the first offending field
    """
    if not isinstance(arguments, dict):
        raise ValidationError("Arguments must be a mapping")

    errors = schema_errors(arguments, schema)
    if errors:
        error = errors[0]
        raise ValidationError(f"Invalid value for '{_field_name(error)}': {error.message}")


def validate_threshold_pair(lambda1: float, lambda2: float) -> Optional[str]:
    """Error message when the regime thresholds are out of order, else None"""
    if not lambda2 < lambda1 <= 1:
        return f"Invalid value for 'lambda2': thresholds require lambda2 < lambda1 <= 1, got {lambda2} and {lambda1}"
    return None


def validate_odd(name: str, value: int, allow_even: bool) -> Optional[str]:
    """Error message when an odd-only parameter is even and even values are not allowed"""
    if value % 2 == 0 and not allow_even:
        return f"Invalid value for '{name}': {value} is even; pass allow_even_psy to permit even lengths"
    return None
