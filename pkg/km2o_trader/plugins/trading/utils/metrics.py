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
Backtest metrics: trade count, profit, profit factor, maximum drawdown.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from km2o_trader.core.exceptions import ValidationError


@dataclass(frozen=True)
class MetricRecord:
    n_trade: int
    profit: float
    profit_factor: float
    max_drawdown: float
    max_drawdown_realized: float
    gross_profit: float
    gross_loss: float
    n_win: int
    n_loss: int

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def max_drawdown(equity: Sequence[float]) -> float:
    """Largest drop from the running peak"""
    equity = np.asarray(equity, dtype=float)
    if len(equity) == 0:
        return 0.0
    return float(np.max(np.maximum.accumulate(equity) - equity))


def profit_factor(pnls: Sequence[float]) -> float:
    """
    Gross wins / gross losses.

    No trades, or no wins and no losses, give 0.0; wins without any loss give +inf.
    """
    pnls = np.asarray(pnls, dtype=float)
    gross_profit = float(pnls[pnls > 0].sum())
    gross_loss = float(-pnls[pnls < 0].sum())
    if gross_loss == 0:
        return math.inf if gross_profit > 0 else 0.0
    return gross_profit / gross_loss


def metrics(
    equity: Sequence[float], trades: Sequence[Any], realized: Optional[Sequence[float]] = None
) -> MetricRecord:
    """
    Metric record from the mark-to-market equity curve and closed trades
    (Trade records or plain pnl numbers).

    Raises:
        ValidationError: empty equity curve
    """
    if len(equity) == 0:
        raise ValidationError("Equity curve is empty")

    pnls = np.array([getattr(trade, "pnl", trade) for trade in trades], dtype=float)
    realized_curve = np.concatenate(([0.0], np.cumsum(pnls))) if realized is None else realized
    return MetricRecord(
        n_trade=len(pnls),
        profit=float(pnls.sum()),
        profit_factor=profit_factor(pnls),
        max_drawdown=max_drawdown(equity),
        max_drawdown_realized=max_drawdown(realized_curve),
        gross_profit=float(pnls[pnls > 0].sum()),
        gross_loss=float(-pnls[pnls < 0].sum()),
        n_win=int(np.count_nonzero(pnls > 0)),
        n_loss=int(np.count_nonzero(pnls < 0)),
    )
