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
Regime labels per price day for the backtester.

Labels come from an external `date,regime` file when one is given, otherwise
from the classifier: the proposed lambda thresholds, or Test(ABN) spans.
"""

from typing import Tuple

import numpy as np

from km2o_trader.plugins.market_data.utils.prices import PriceSeries, load_regimes_csv
from km2o_trader.plugins.stationarity.utils.classifier import (
    abn_baseline,
    align_to_prices,
    classify,
    compute_rates,
    regimes_from_abn,
)
from km2o_trader.plugins.stationarity.utils.transforms import to_ccr
from km2o_trader.utils.config_reader import RunConfig
from km2o_trader.utils.logger import get_logger

logger = get_logger("regimes")


def resolve_regimes(prices: PriceSeries, config: RunConfig) -> Tuple[np.ndarray, str]:
    """
    Labels aligned to `prices` and a short name of where they came from.

    Raises:
        ValidationError: misaligned regime file or too short a series
        DataIOError: unreadable regime file
    """
    if config.regimes:
        logger.info(f"Using regime labels from {config.regimes}")
        return load_regimes_csv(config.regimes, prices), "file"

    rates = compute_rates(
        to_ccr(prices),
        config.window,
        mode=config.orthogonality,
        budget=config.lag_budget,
        workers=config.workers,
    )

    if config.regime_source == "abn":
        lambdas = rates.lambdas(1.0)
        regimes = regimes_from_abn(abn_baseline(lambdas), lambdas)
    else:
        regimes = classify(rates.lambdas(config.alpha), config.lambda1, config.lambda2)

    return align_to_prices(regimes, prices), config.regime_source
