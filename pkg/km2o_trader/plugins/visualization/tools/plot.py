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
Chart tool for classification and backtest outputs.
"""

from pathlib import Path
from typing import Any, Dict

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import EQUITY_CHART_FILE, LAMBDA_CHART_FILE
from km2o_trader.core.exceptions import ValidationError
from km2o_trader.plugins.market_data.utils.prices import load_csv
from km2o_trader.plugins.visualization.utils.charts import plot_equity, plot_lambda, read_table


class Plot(BaseTool):
    """
    lambda.png from `classification` plus the price `input`; equity.png from `equity`.
    """

    def __init__(self):
        super().__init__()
        self.name = "plot"
        self.description = "Render price/lambda and equity charts as PNG"
        self.dependencies = ["matplotlib"]
        self.inputSchema = {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Price CSV (needed with classification)"},
                "classification": {"type": "string", "description": "classification.csv to chart"},
                "equity": {"type": "string", "description": "equity.csv to chart"},
            },
        }

    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        config = self.get_config(arguments)
        output_dir = Path(config.output_dir)

        if not config.classification and not config.equity:
            raise ValidationError("Invalid value for 'classification': nothing to plot, pass classification and/or equity")

        outputs = []
        if config.classification:
            if not config.input:
                raise ValidationError("Invalid value for 'input': a price file is required to chart a classification")
            classification = read_table(config.classification, ("date", "lambda", "regime"))
            path = plot_lambda(
                load_csv(config.input),
                classification,
                output_dir / LAMBDA_CHART_FILE,
                lambda1=config.lambda1,
                lambda2=config.lambda2,
            )
            outputs.append(str(path))

        if config.equity:
            equity = read_table(config.equity, ("date", "equity"))
            outputs.append(str(plot_equity(equity, output_dir / EQUITY_CHART_FILE)))

        return {"outputs": outputs}
