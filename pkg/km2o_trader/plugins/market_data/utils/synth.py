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
Synthetic daily closes with known stationarity properties.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from km2o_trader.core.constants import DEFAULT_START_PRICE, SYNTH_KINDS
from km2o_trader.core.exceptions import ValidationError
from km2o_trader.plugins.market_data.utils.prices import PriceSeries

SYNTH_START_DATE = "2000-01-03"


@dataclass(frozen=True)
class SynthSpec:
    """
    Generator recipe; `generate` is a pure function of it.

    gaussian-walk uses mu/sigma for every daily log-return (sigma may be 0).
    variance-switch uses sigma_before for returns into days < switch_day and
    sigma_after from switch_day on.
    """

    kind: str
    length: int
    seed: int = 0
    mu: float = 0.0
    sigma: float = 0.01
    sigma_before: float = 0.01
    sigma_after: float = 0.05
    switch_day: Optional[int] = None
    start_price: float = DEFAULT_START_PRICE

    def __post_init__(self):
        if self.kind not in SYNTH_KINDS:
            raise ValidationError(f"Invalid value for 'synth_kind': {self.kind} (expected one of {SYNTH_KINDS})")
        if self.length < 2:
            raise ValidationError(f"Invalid value for 'length': {self.length} (at least 2 days)")
        if self.start_price <= 0:
            raise ValidationError(f"Invalid value for 'start_price': {self.start_price}")
        if self.kind == "gaussian-walk" and self.sigma < 0:
            raise ValidationError(f"Invalid value for 'sigma': {self.sigma} (must be >= 0)")
        if self.kind == "variance-switch":
            if self.sigma_before <= 0 or self.sigma_after <= 0:
                raise ValidationError("Invalid value for 'sigma_before'/'sigma_after': both must be > 0")
            if self.switch_day is None or not 0 < self.switch_day < self.length:
                raise ValidationError(
                    f"Invalid value for 'switch_day': {self.switch_day} (need 0 < switch_day < {self.length})"
                )


def daily_sigmas(spec: SynthSpec) -> np.ndarray:
    """Per-return standard deviation; entry k drives the move into day k+1"""
    if spec.kind == "gaussian-walk":
        return np.full(spec.length - 1, spec.sigma)
    into_day = np.arange(1, spec.length)
    return np.where(into_day < spec.switch_day, spec.sigma_before, spec.sigma_after)


def generate(spec: SynthSpec) -> PriceSeries:
    """
    Geometric random walk on consecutive weekdays.

    Log-returns are independent Normal(mu, sigma_k^2); the same spec always
    yields the same series.
    """
    rng = np.random.default_rng(spec.seed)
    returns = spec.mu + daily_sigmas(spec) * rng.standard_normal(spec.length - 1)
    log_path = np.concatenate(([0.0], np.cumsum(returns)))
    closes = spec.start_price * np.exp(log_path)
    dates = pd.bdate_range(start=SYNTH_START_DATE, periods=spec.length)
    return PriceSeries(dates=dates, closes=closes)
