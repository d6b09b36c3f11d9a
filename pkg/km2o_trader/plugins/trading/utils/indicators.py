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
Technical indicators and the three position rules.

Rule 1 (stationary): follow the slope of the moving average.
Rule 2 (non-stationary): fade the psychological line.
Rule 3 (intermediate or unclassifiable): stay flat.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Union

import numpy as np

from km2o_trader.core.constants import (
    BACKTEST_MODES,
    REGIME_NON_STATIONARY,
    REGIME_STATIONARY,
)
from km2o_trader.core.exceptions import InsufficientHistoryError, ValidationError
from km2o_trader.plugins.market_data.utils.prices import PriceSeries
from km2o_trader.utils.logger import get_logger
from km2o_trader.utils.validators import validate_odd

logger = get_logger("indicators")

TREND_UP = "up"
TREND_DOWN = "down"


class Position(IntEnum):
    """One unit long, flat or one unit short"""

    SHORT = -1
    FLAT = 0
    LONG = 1

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class IndicatorParams:
    n_ma: int
    n_psy: int
    allow_even_psy: bool = False

    def __post_init__(self):
        if self.n_ma < 2:
            raise ValidationError(f"Invalid value for 'n_ma': {self.n_ma} (must be >= 2)")
        if self.n_psy < 1:
            raise ValidationError(f"Invalid value for 'n_psy': {self.n_psy} (must be >= 1)")
        problem = validate_odd("n_psy", self.n_psy, self.allow_even_psy)
        if problem:
            raise ValidationError(problem)


def _closes(prices: Union[PriceSeries, np.ndarray]) -> np.ndarray:
    return prices.closes if isinstance(prices, PriceSeries) else np.asarray(prices, dtype=float)


def _require(i: int, minimum: int, size: int, what: str) -> None:
    if i < minimum or i >= size:
        raise InsufficientHistoryError(f"{what} at day {i} needs day index in [{minimum}, {size - 1}]")


def moving_average(prices: Union[PriceSeries, np.ndarray], n_ma: int, i: int) -> float:
    """Mean close over days i-n_ma+1..i"""
    closes = _closes(prices)
    _require(i, n_ma - 1, len(closes), f"MA({n_ma})")
    return float(closes[i - n_ma + 1 : i + 1].mean())


def ma_trend(prices: Union[PriceSeries, np.ndarray], n_ma: int, i: int) -> str:
    """up iff MA(n_ma, i) - MA(n_ma, i - n_ma) >= 0"""
    closes = _closes(prices)
    _require(i, 2 * n_ma - 1, len(closes), f"MA({n_ma}) slope")
    slope = moving_average(closes, n_ma, i) - moving_average(closes, n_ma, i - n_ma)
    return TREND_UP if slope >= 0 else TREND_DOWN


def up_count(prices: Union[PriceSeries, np.ndarray], n_psy: int, i: int) -> int:
    """Number of k in i-n_psy+1..i with close(k) > close(k-1)"""
    closes = _closes(prices)
    _require(i, n_psy, len(closes), f"Psy({n_psy})")
    changes = np.diff(closes[i - n_psy : i + 1])
    return int(np.count_nonzero(changes > 0))


def psych_line(prices: Union[PriceSeries, np.ndarray], n_psy: int, i: int) -> float:
    """Fraction of up-days among the last n_psy daily changes"""
    return up_count(prices, n_psy, i) / n_psy


def rule_one(closes: np.ndarray, params: IndicatorParams, i: int) -> Position:
    return Position.LONG if ma_trend(closes, params.n_ma, i) == TREND_UP else Position.SHORT


def rule_two(closes: np.ndarray, params: IndicatorParams, i: int, previous: Position) -> Position:
    """
    Long when Psy <= (n-1)/(2n), short when Psy >= (n+1)/(2n).

    Compared on integer up-counts; with even n, Psy = 1/2 keeps `previous`.
    """
    ups = up_count(closes, params.n_psy, i)
    if 2 * ups <= params.n_psy - 1:
        return Position.LONG
    if 2 * ups >= params.n_psy + 1:
        return Position.SHORT
    return previous


def active_rule(regime: str, mode: str = "full") -> Optional[int]:
    """Rule number governing a day (1 or 2), or None for flat"""
    if mode not in BACKTEST_MODES:
        raise ValidationError(f"Invalid value for 'mode': {mode} (expected one of {BACKTEST_MODES})")
    if mode == "ma-only" or (mode == "full" and regime == REGIME_STATIONARY):
        return 1
    if regime == REGIME_NON_STATIONARY:
        return 2
    return None


def history_needed(rule: int, params: IndicatorParams) -> int:
    """First day index at which a rule's indicator is defined"""
    return 2 * params.n_ma - 1 if rule == 1 else params.n_psy


def target_position(
    regime: str,
    prices: Union[PriceSeries, np.ndarray],
    params: IndicatorParams,
    i: int,
    previous: Position = Position.FLAT,
    mode: str = "full",
    warn: bool = True,
) -> Position:
    """
    Position wanted after day i's close, from information through day i.

    mode full applies all three rules, rule2-only trades non-stationary days
    only, ma-only applies Rule 1 on every day. Missing indicator history
    gives flat with a warning.
    """
    rule = active_rule(regime, mode)
    if rule is None:
        return Position.FLAT

    if i < history_needed(rule, params):
        if warn:
            logger.warning(f"Staying flat on day {i}: Rule {rule} needs {history_needed(rule, params)} days of history")
        return Position.FLAT

    closes = _closes(prices)
    if rule == 1:
        return rule_one(closes, params, i)
    return rule_two(closes, params, i, previous)
