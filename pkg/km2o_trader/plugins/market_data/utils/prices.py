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
Daily closing-price series: validation, CSV loading and writing.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from km2o_trader.core.constants import REGIME_LABELS
from km2o_trader.core.exceptions import DataIOError, ValidationError
from km2o_trader.utils.logger import get_logger

logger = get_logger("market_data")

PathLike = Union[str, Path]

# Header occupies line 1, first data row is line 2
_FIRST_DATA_LINE = 2


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """
    Dated sequence of daily closes.

    Attributes:
        dates: strictly increasing, normalized calendar days
        closes: positive closing prices, same length as dates
    """

    dates: pd.DatetimeIndex
    closes: np.ndarray

    def __post_init__(self):
        dates = pd.DatetimeIndex(self.dates).normalize()
        closes = np.asarray(self.closes, dtype=float)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "closes", closes)

        if closes.ndim != 1 or len(closes) != len(dates):
            raise ValidationError("Dates and closes must be one-dimensional and of equal length")
        if len(closes) < 2:
            raise ValidationError(f"A price series needs at least 2 rows, got {len(closes)}")
        if not np.all(np.isfinite(closes)) or np.any(closes <= 0):
            raise ValidationError("Every close must be a finite positive price")
        if dates.has_duplicates:
            raise ValidationError("Duplicate dates in price series")
        if not dates.is_monotonic_increasing:
            raise ValidationError("Dates must be strictly increasing")

    def __len__(self) -> int:
        return len(self.closes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return self.dates.equals(other.dates) and np.array_equal(self.closes, other.closes)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"date": self.dates.strftime("%Y-%m-%d"), "close": self.closes})

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "PriceSeries":
        return cls(dates=pd.DatetimeIndex(frame["date"]), closes=frame["close"].to_numpy(dtype=float))

    def prefix(self, stop: int) -> "PriceSeries":
        """First `stop` days of the series"""
        return PriceSeries(dates=self.dates[:stop], closes=self.closes[:stop])


def _read_table(path: PathLike) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, skip_blank_lines=False, keep_default_na=False)
    except FileNotFoundError:
        raise DataIOError(f"Price file not found: {path}")
    except pd.errors.EmptyDataError:
        raise ValidationError(f"Price file is empty: {path}")
    except (OSError, UnicodeDecodeError) as e:
        raise DataIOError(f"Cannot read price file {path}: {e}")
    except pd.errors.ParserError as e:
        raise ValidationError(f"Malformed price file {path}: {e}")

    frame.columns = [str(c).strip().lower() for c in frame.columns]
    return frame


def _parse_close(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return math.nan


def load_csv(path: PathLike) -> PriceSeries:
    """
    Load a `date,close` CSV (ISO dates, extra columns ignored).

    Out-of-order rows are sorted with a warning; duplicate dates, non-positive
    closes and unparseable rows are rejected with the offending line number.

    Raises:
        DataIOError: file missing or unreadable
        ValidationError: malformed content
    """
    frame = _read_table(path)

    for required in ("date", "close"):
        if required not in frame.columns:
            raise ValidationError(f"Missing required column '{required}' in {path}")

    raw_dates = frame["date"].str.strip()
    raw_closes = frame["close"].str.strip()
    dates = pd.to_datetime(raw_dates, format="ISO8601", errors="coerce")
    closes = raw_closes.map(_parse_close).astype(float)

    for row, (date, close) in enumerate(zip(dates, closes)):
        line = row + _FIRST_DATA_LINE
        if pd.isna(date):
            raise ValidationError(f"Line {line}: unparseable date '{raw_dates.iloc[row]}'")
        if pd.isna(close) or not np.isfinite(close):
            raise ValidationError(f"Line {line}: unparseable close '{raw_closes.iloc[row]}'")
        if close <= 0:
            raise ValidationError(f"Line {line}: close must be positive, got {raw_closes.iloc[row]}")

    dates = pd.DatetimeIndex(dates).normalize()
    duplicated = dates.duplicated()
    if duplicated.any():
        row = int(np.argmax(duplicated))
        raise ValidationError(
            f"Line {row + _FIRST_DATA_LINE}: duplicate date {dates[row].strftime('%Y-%m-%d')}"
        )

    if len(dates) < 2:
        raise ValidationError(f"Price file {path} has {len(dates)} data rows, at least 2 are required")

    order = np.argsort(dates.to_numpy(), kind="stable")
    if not dates.is_monotonic_increasing:
        logger.warning(f"Rows in {path} are not in date order; sorting ascending")

    series = PriceSeries(dates=dates[order], closes=closes.to_numpy(dtype=float)[order])
    logger.debug(f"Loaded {len(series)} closes from {path}")
    return series


def write_prices_csv(prices: PriceSeries, path: PathLike) -> None:
    """Write `date,close`; closes keep full precision so a reload is exact"""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        prices.to_frame().to_csv(target, index=False, lineterminator="\n")
    except OSError as e:
        raise DataIOError(f"Cannot write price file {target}: {e}")


def load_regimes_csv(path: PathLike, prices: PriceSeries) -> np.ndarray:
    """
    Read externally supplied `date,regime` labels aligned to `prices`.

    Every price date needs a label; dates absent from `prices` are ignored.

    Raises:
        DataIOError: file missing or unreadable
        ValidationError: unknown label, duplicate date, or a price date without label
    """
    frame = _read_table(path)
    for required in ("date", "regime"):
        if required not in frame.columns:
            raise ValidationError(f"Missing required column '{required}' in {path}")

    dates = pd.to_datetime(frame["date"].str.strip(), format="ISO8601", errors="coerce")
    labels = frame["regime"].str.strip().str.lower()

    for row, (date, label) in enumerate(zip(dates, labels)):
        line = row + _FIRST_DATA_LINE
        if pd.isna(date):
            raise ValidationError(f"Line {line}: unparseable date '{frame['date'].iloc[row]}'")
        if label not in REGIME_LABELS:
            raise ValidationError(f"Line {line}: unknown regime '{label}' (expected one of {REGIME_LABELS})")

    index = pd.DatetimeIndex(dates).normalize()
    if index.has_duplicates:
        raise ValidationError(f"Duplicate dates in regime file {path}")

    aligned = pd.Series(labels.to_numpy(), index=index).reindex(prices.dates)
    missing = aligned.isna()
    if missing.any():
        first = prices.dates[int(np.argmax(missing.to_numpy()))].strftime("%Y-%m-%d")
        raise ValidationError(
            f"Regime file {path} does not cover {int(missing.sum())} price dates (first: {first})"
        )
    return aligned.to_numpy(dtype=object)
