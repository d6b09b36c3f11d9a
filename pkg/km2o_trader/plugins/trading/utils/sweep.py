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
Grid of backtests over (n_ma, n_psy), ranked by profit.
"""

from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from km2o_trader.core.exceptions import ValidationError
from km2o_trader.plugins.market_data.utils.prices import PriceSeries
from km2o_trader.plugins.trading.utils.backtester import backtest
from km2o_trader.plugins.trading.utils.indicators import IndicatorParams
from km2o_trader.utils.logger import get_logger

logger = get_logger("sweep")

SWEEP_COLUMNS = ["n_ma", "n_psy", "n_trade", "profit", "pf", "mdd"]


def parameter_grid(nma_values: Iterable[int], npsy_values: Iterable[int]) -> List[Tuple[int, int]]:
    """Every (n_ma, n_psy) combination, n_ma major"""
    grid = list(product(sorted(set(nma_values)), sorted(set(npsy_values))))
    if not grid:
        raise ValidationError("Sweep grid is empty")
    return grid


def _combination_row(task: Tuple[PriceSeries, np.ndarray, int, int, str, bool]) -> Dict[str, float]:
    """Worker: metric row of one combination"""
    prices, regimes, n_ma, n_psy, mode, allow_even_psy = task
    params = IndicatorParams(n_ma=n_ma, n_psy=n_psy, allow_even_psy=allow_even_psy)
    record = backtest(prices, regimes, params, mode=mode, warn=False).metrics
    return {
        "n_ma": n_ma,
        "n_psy": n_psy,
        "n_trade": record.n_trade,
        "profit": record.profit,
        "pf": record.profit_factor,
        "mdd": record.max_drawdown,
    }


def sweep(
    prices: PriceSeries,
    regimes: Sequence[str],
    nma_values: Iterable[int],
    npsy_values: Iterable[int],
    mode: str = "full",
    allow_even_psy: bool = False,
    workers: int = 1,
) -> pd.DataFrame:
    """
    Backtest every combination and rank by profit descending, ties by (n_ma, n_psy).

    Raises:
        ValidationError: empty grid or an invalid parameter
    """
    grid = parameter_grid(nma_values, npsy_values)
    for n_ma, n_psy in grid:
        IndicatorParams(n_ma=n_ma, n_psy=n_psy, allow_even_psy=allow_even_psy)

    regimes = np.asarray(regimes, dtype=object)
    tasks = [(prices, regimes, n_ma, n_psy, mode, allow_even_psy) for n_ma, n_psy in grid]
    logger.info(f"Sweeping {len(tasks)} combinations ({mode} mode)")

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_combination_row, tasks))
    else:
        rows = [_combination_row(task) for task in tasks]

    table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    table = table.sort_values(["profit", "n_ma", "n_psy"], ascending=[False, True, True], kind="mergesort")
    return table.reset_index(drop=True)
