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
From closing prices to the 171 two-dimensional pair series of one window.

    prices -> CCR x(n) -> window x(i-N..i) -> normalized window
           -> 19 nonlinear transforms -> 171 pairs (i < j)
"""

from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from km2o_trader.core.constants import PAIR_DIMENSION, TOTAL_PAIRS
from km2o_trader.core.exceptions import DegenerateWindowError, InsufficientHistoryError, ValidationError
from km2o_trader.plugins.market_data.utils.prices import PriceSeries


@dataclass(frozen=True)
class Transform:
    """Product of lagged powers: prod over (lag, power) of x~(n - lag) ** power"""

    index: int
    factors: Tuple[Tuple[int, int], ...]

    @property
    def offset(self) -> int:
        return max(lag for lag, _ in self.factors)

    @property
    def degree(self) -> int:
        return sum(power for _, power in self.factors)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Values for n = offset..N"""
        size = len(values)
        result = np.ones(size - self.offset)
        for lag, power in self.factors:
            result = result * values[self.offset - lag : size - lag] ** power
        return result


TRANSFORMS: Tuple[Transform, ...] = tuple(
    Transform(index, factors)
    for index, factors in enumerate(
        (
            ((0, 1),),
            ((0, 2),),
            ((0, 3),),
            ((0, 1), (1, 1)),
            ((0, 4),),
            ((0, 2), (1, 1)),
            ((0, 1), (2, 1)),
            ((0, 5),),
            ((0, 3), (1, 1)),
            ((0, 2), (2, 1)),
            ((0, 1), (1, 2)),
            ((0, 1), (3, 1)),
            ((0, 6),),
            ((0, 4), (1, 1)),
            ((0, 3), (2, 1)),
            ((0, 2), (1, 2)),
            ((0, 2), (3, 1)),
            ((0, 1), (1, 1), (2, 1)),
            ((0, 1), (4, 1)),
        )
    )
)

TRANSFORM_OFFSETS: Tuple[int, ...] = tuple(t.offset for t in TRANSFORMS)

PAIR_IDS: Tuple[Tuple[int, int], ...] = tuple(combinations(range(len(TRANSFORMS)), PAIR_DIMENSION))
assert len(PAIR_IDS) == TOTAL_PAIRS


@dataclass(frozen=True, eq=False)
class CcrSeries:
    """Daily log-returns; values[k] belongs to price day k+1 (dates[k])"""

    dates: pd.DatetimeIndex
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class NormalizedWindow:
    """Window of N+1 CCR values with mean 0 and variance 1 (denominator N+1)"""

    values: np.ndarray
    anchor: int

    @property
    def window(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True, eq=False)
class PairSeries:
    """Components (x_i, x_j) on their common support n = offset..N, shape (length, 2)"""

    i: int
    j: int
    offset: int
    values: np.ndarray

    @property
    def length(self) -> int:
        return len(self.values)


def to_ccr(prices: PriceSeries) -> CcrSeries:
    """values[k] = log close(k+1) - log close(k)"""
    return CcrSeries(dates=prices.dates[1:], values=np.diff(np.log(prices.closes)))


def cut_window(ccr: Union[CcrSeries, np.ndarray], i: int, window: int) -> np.ndarray:
    """
    Raw window x(i-N..i) of N+1 values ending at CCR index i.

    Raises:
        InsufficientHistoryError: i < N or i beyond the series
    """
    values = ccr.values if isinstance(ccr, CcrSeries) else np.asarray(ccr, dtype=float)
    if i < window:
        raise InsufficientHistoryError(f"insufficient history: day index {i} needs at least {window} earlier returns")
    if i >= len(values):
        raise InsufficientHistoryError(f"insufficient history: day index {i} is past the last return {len(values) - 1}")
    return values[i - window : i + 1]


def normalize(raw: Sequence[float], anchor: int = -1) -> NormalizedWindow:
    """
    Center and scale a window to mean 0 and variance 1.

    Raises:
        DegenerateWindowError: constant window
    """
    values = np.asarray(raw, dtype=float)
    if np.ptp(values) == 0:
        raise DegenerateWindowError(f"constant window at day index {anchor}")
    centered = values - values.mean()
    variance = np.mean(centered**2)
    return NormalizedWindow(values=centered / np.sqrt(variance), anchor=anchor)


def apply_transforms(window: Union[NormalizedWindow, np.ndarray]) -> List[np.ndarray]:
    """The 19 component sequences; component k covers n = TRANSFORM_OFFSETS[k]..N"""
    values = window.values if isinstance(window, NormalizedWindow) else np.asarray(window, dtype=float)
    return [transform.apply(values) for transform in TRANSFORMS]


def build_pairs(components: Sequence[np.ndarray]) -> List[PairSeries]:
    """
    All 171 pairs (i < j) in lexicographic order, cut to common support.

    Raises:
        DegenerateWindowError: a component holds non-finite values
    """
    if len(components) != len(TRANSFORMS):
        raise ValueError(f"Expected {len(TRANSFORMS)} components, got {len(components)}")

    for index, component in enumerate(components):
        if not np.all(np.isfinite(component)):
            raise DegenerateWindowError(f"transform x{index} produced non-finite values")

    pairs = []
    for i, j in PAIR_IDS:
        offset = max(TRANSFORM_OFFSETS[i], TRANSFORM_OFFSETS[j])
        first = components[i][offset - TRANSFORM_OFFSETS[i] :]
        second = components[j][offset - TRANSFORM_OFFSETS[j] :]
        pairs.append(PairSeries(i=i, j=j, offset=offset, values=np.column_stack((first, second))))
    return pairs


def window_pairs(ccr: Union[CcrSeries, np.ndarray], i: int, window: int) -> List[PairSeries]:
    """cut_window -> normalize -> apply_transforms -> build_pairs for one day"""
    return build_pairs(apply_transforms(normalize(cut_window(ccr, i, window), anchor=i)))


def index_of(ccr: CcrSeries, day: str) -> int:
    """
    CCR index whose value completes on price date `day`.

    Raises:
        ValidationError: unparseable date or no return on that date
    """
    try:
        stamp = pd.Timestamp(day).normalize()
    except ValueError:
        raise ValidationError(f"Invalid value for 'day': cannot parse '{day}'")
    positions = np.flatnonzero(ccr.dates == stamp)
    if len(positions) == 0:
        raise ValidationError(f"Invalid value for 'day': no return on {stamp.strftime('%Y-%m-%d')}")
    return int(positions[0])
