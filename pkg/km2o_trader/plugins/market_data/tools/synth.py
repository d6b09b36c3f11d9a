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
Synthetic price series tool.
"""

from pathlib import Path
from typing import Any, Dict

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import SYNTH_FILE
from km2o_trader.plugins.market_data.utils.prices import write_prices_csv
from km2o_trader.plugins.market_data.utils.synth import SynthSpec, generate


class Synth(BaseTool):
    """
    Write a seeded synthetic `date,close` series.

    gaussian-walk draws iid N(mu, sigma) log-returns; variance-switch changes
    the return volatility from sigma_before to sigma_after at switch_day.
    """

    def __init__(self):
        super().__init__()
        self.name = "synth"
        self.description = "Generate a synthetic price series with known stationarity properties"
        self.inputSchema = {
            "type": "object",
            "properties": {
                "synth_kind": {"type": "string", "enum": ["gaussian-walk", "variance-switch"]},
                "length": {"type": "integer", "description": "Number of days"},
                "seed": {"type": "integer", "description": "Random seed"},
                "mu": {"type": "number", "description": "Mean daily log-return (gaussian-walk)"},
                "sigma": {"type": "number", "description": "Daily log-return volatility (gaussian-walk)"},
                "sigma_before": {"type": "number", "description": "Volatility before the switch"},
                "sigma_after": {"type": "number", "description": "Volatility from the switch day on"},
                "switch_day": {"type": "integer", "description": "Day index of the volatility switch"},
                "start_price": {"type": "number", "description": "First close"},
                "output": {"type": "string", "description": "Target CSV (default <output_dir>/synthetic.csv)"},
            },
        }

    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        config = self.get_config(arguments)
        spec = SynthSpec(
            kind=config.synth_kind,
            length=config.length,
            seed=config.seed,
            mu=config.mu,
            sigma=config.sigma,
            sigma_before=config.sigma_before,
            sigma_after=config.sigma_after,
            switch_day=config.switch_day,
            start_price=config.start_price,
        )
        prices = generate(spec)

        target = Path(config.output) if config.output else Path(config.output_dir) / SYNTH_FILE
        write_prices_csv(prices, target)
        self.logger.debug(f"Synthetic {spec.kind} series of {len(prices)} days written to {target}")

        return {
            "outputs": [str(target)],
            "kind": spec.kind,
            "days": len(prices),
            "seed": spec.seed,
            "first_date": prices.dates[0].strftime("%Y-%m-%d"),
            "last_date": prices.dates[-1].strftime("%Y-%m-%d"),
        }
