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
Bit-stable report writer: fixed key order, 6 fractional digits, `\n` line endings.
"""

import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Union

import numpy as np
import pandas as pd

from km2o_trader.core.constants import FLOAT_FORMAT, INFINITY_SENTINEL, REPORT_DECIMALS
from km2o_trader.core.exceptions import DataIOError, ValidationError
from km2o_trader.utils.logger import get_logger

logger = get_logger("reports")

REPORT_FORMATS = ("csv", "json")


def format_float(value: float) -> str:
    """Fixed-point text for CSV cells; infinities use the sentinel, NaN is empty"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if math.isinf(value):
        return INFINITY_SENTINEL if value > 0 else f"-{INFINITY_SENTINEL}"
    return FLOAT_FORMAT % value


def to_json_safe(value: Any) -> Any:
    """Recursively convert numpy/pandas values and round floats for JSON output"""
    if isinstance(value, Mapping):
        return {str(key): to_json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_json_safe(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return INFINITY_SENTINEL if value > 0 else f"-{INFINITY_SENTINEL}"
        rounded = round(value, REPORT_DECIMALS)
        return 0.0 if rounded == 0 else rounded
    if isinstance(value, pd.Timestamp):
        return value.strftime("%Y-%m-%d")
    return value


def _frame_for_csv(record: Union[pd.DataFrame, Iterable[Mapping[str, Any]]]) -> pd.DataFrame:
    frame = record.copy() if isinstance(record, pd.DataFrame) else pd.DataFrame(list(record))
    for column in frame.columns:
        if pd.api.types.is_float_dtype(frame[column]):
            frame[column] = frame[column].map(format_float)
        elif pd.api.types.is_datetime64_any_dtype(frame[column]):
            frame[column] = frame[column].dt.strftime("%Y-%m-%d")
    return frame


def write_report(record: Any, fmt: str, path: Union[str, Path]) -> Path:
    """
    Write a report record as CSV (DataFrame or rows of mappings) or JSON (mapping).

    Raises:
        ValidationError: unknown format
        DataIOError: destination not writable
    """
    if fmt not in REPORT_FORMATS:
        raise ValidationError(f"Unknown report format '{fmt}' (expected one of {REPORT_FORMATS})")

    target = Path(path)
    if fmt == "json":
        text = json.dumps(to_json_safe(record), indent=2) + "\n"
    else:
        text = _frame_for_csv(record).to_csv(index=False, lineterminator="\n")

    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as e:
        raise DataIOError(f"Cannot write report {target}: {e}")

    logger.debug(f"Wrote {fmt} report to {target}")
    return target
