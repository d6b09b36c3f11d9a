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
Next-close execution backtest of the three-rule strategy.

The position decided from day i's close is established at day i+1's close;
one unit per position, no fees, no capital limit. Equity is marked to market
at every close and an open position is left open at the end.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from km2o_trader.core.exceptions import ValidationError
from km2o_trader.plugins.market_data.utils.prices import PriceSeries
from km2o_trader.plugins.trading.utils.indicators import (
    IndicatorParams,
    Position,
    active_rule,
    history_needed,
    target_position,
)
from km2o_trader.plugins.trading.utils.metrics import MetricRecord, metrics
from km2o_trader.utils.logger import get_logger

logger = get_logger("backtester")


@dataclass(frozen=True)
class Trade:
    """A round trip; pnl = direction * (exit_price - entry_price)"""

    entry_date: pd.Timestamp
    exit_date: Optional[pd.Timestamp]
    direction: Position
    entry_price: float
    exit_price: Optional[float]
    pnl: float


@dataclass(eq=False)
class BacktestResult:
    dates: pd.DatetimeIndex
    targets: np.ndarray
    positions: np.ndarray
    equity: np.ndarray
    realized: np.ndarray
    trades: List[Trade]
    metrics: MetricRecord
    params: IndicatorParams
    mode: str
    open_trade: Optional[Trade] = None
    extra: dict = field(default_factory=dict)

    def equity_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "date": self.dates.strftime("%Y-%m-%d"),
                "position": [Position(int(p)).label for p in self.positions],
                "equity": self.equity.astype(float),
                "realized": self.realized.astype(float),
            }
        )

    def trades_frame(self) -> pd.DataFrame:
        columns = ["entry_date", "exit_date", "direction", "entry_price", "exit_price", "pnl"]
        rows = [
            {
                "entry_date": trade.entry_date.strftime("%Y-%m-%d"),
                "exit_date": trade.exit_date.strftime("%Y-%m-%d"),
                "direction": trade.direction.label,
                "entry_price": float(trade.entry_price),
                "exit_price": float(trade.exit_price),
                "pnl": float(trade.pnl),
            }
            for trade in self.trades
        ]
        return pd.DataFrame(rows, columns=columns).astype(
            {"entry_price": float, "exit_price": float, "pnl": float}
        )

    def report(self) -> dict:
        """Report record with a fixed key order"""
        record = {
            "n_trade": self.metrics.n_trade,
            "profit": self.metrics.profit,
            "profit_factor": self.metrics.profit_factor,
            "max_drawdown": self.metrics.max_drawdown,
            "max_drawdown_realized": self.metrics.max_drawdown_realized,
            "gross_profit": self.metrics.gross_profit,
            "gross_loss": self.metrics.gross_loss,
            "n_win": self.metrics.n_win,
            "n_loss": self.metrics.n_loss,
            "open_position": Position(int(self.positions[-1])).label,
            "final_equity": float(self.equity[-1]),
            "params": {
                "n_ma": self.params.n_ma,
                "n_psy": self.params.n_psy,
                "mode": self.mode,
            },
        }
        record["params"].update(self.extra)
        return record


def decide_targets(
    closes: np.ndarray, regimes: Sequence[str], params: IndicatorParams, mode: str = "full", warn: bool = True
) -> np.ndarray:
    """Target position after each day's close, from that day's regime and indicators"""
    targets = np.zeros(len(closes), dtype=int)
    previous = Position.FLAT
    short_days = []
    for i in range(len(closes)):
        rule = active_rule(regimes[i], mode)
        if rule is not None and i < history_needed(rule, params):
            short_days.append(i)
        previous = target_position(regimes[i], closes, params, i, previous=previous, mode=mode, warn=False)
        targets[i] = int(previous)

    if short_days and warn:
        logger.warning(
            f"Stayed flat on {len(short_days)} days lacking indicator history (first day index {short_days[0]})"
        )
    return targets


def backtest(
    prices: PriceSeries,
    regimes: Sequence[str],
    params: IndicatorParams,
    mode: str = "full",
    warn: bool = True,
) -> BacktestResult:
    """
    Run the strategy over `prices` with per-day regime labels.

    Raises:
        ValidationError: regimes not aligned with prices
    """
    if len(regimes) != len(prices):
        raise ValidationError(f"Regimes ({len(regimes)} days) not aligned with prices ({len(prices)} days)")

    closes = prices.closes
    dates = prices.dates
    targets = decide_targets(closes, regimes, params, mode, warn)

    days = len(closes)
    positions = np.zeros(days, dtype=int)
    equity = np.zeros(days)
    realized = np.zeros(days)
    trades: List[Trade] = []

    held = Position.FLAT
    entry_price = 0.0
    entry_date = None
    realized_total = 0.0

    for day in range(1, days):
        wanted = Position(int(targets[day - 1]))
        price = closes[day]
        if wanted != held:
            if held != Position.FLAT:
                pnl = int(held) * (price - entry_price)
                trades.append(Trade(entry_date, dates[day], held, entry_price, price, pnl))
                realized_total += pnl
            if wanted != Position.FLAT:
                entry_price, entry_date = price, dates[day]
            held = wanted

        positions[day] = int(held)
        realized[day] = realized_total
        equity[day] = realized_total + int(held) * (price - entry_price)

    open_trade = None
    if held != Position.FLAT:
        open_trade = Trade(entry_date, None, held, entry_price, None, int(held) * (closes[-1] - entry_price))

    result = BacktestResult(
        dates=dates,
        targets=targets,
        positions=positions,
        equity=equity,
        realized=realized,
        trades=trades,
        metrics=metrics(equity, trades, realized),
        params=params,
        mode=mode,
        open_trade=open_trade,
    )
    logger.debug(
        f"Backtest n_ma={params.n_ma} n_psy={params.n_psy} mode={mode}: "
        f"{result.metrics.n_trade} trades, profit {result.metrics.profit:.2f}"
    )
    return result
