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
CCR conversion tool: daily log-returns of a price file, optionally with one
day's pair series dumped for inspection.
"""

from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from km2o_trader.core.base_tool import BaseTool
from km2o_trader.core.constants import CCR_FILE
from km2o_trader.core.exceptions import DegenerateWindowError, ValidationError
from km2o_trader.plugins.market_data.utils.prices import load_csv
from km2o_trader.plugins.market_data.utils.reports import write_report
from km2o_trader.plugins.stationarity.utils.transforms import index_of, to_ccr, window_pairs


class Transform(BaseTool):
    """Write `date,ccr` and, with `pair` and `day`, that day's `n,x_i,x_j` series"""

    def __init__(self):
        super().__init__()
        self.name = "transform"
        self.description = "Convert closing prices to daily log-returns (CCR) and dump pair series"
        self.inputSchema = {
            "type": "object",
            "properties": {
                "input": {"type": "string", "description": "Price CSV with date,close columns"},
                "output_dir": {"type": "string", "description": "Directory receiving ccr.csv"},
                "pair": {
                    "type": "array",
                    "items": {"type": "integer"},
                    "description": "Transform indices i,j (0..18, i < j) of a pair series to dump",
                },
                "day": {"type": "string", "description": "Price date whose window is dumped"},
                "window": {"type": "integer", "description": "Window length N"},
            },
            "required": ["input"],
        }

    def execute(self, arguments: Dict[str, Any]) -> Dict[str, Any]:
        config = self.get_config(arguments)
        output_dir = Path(config.output_dir)

        prices = load_csv(config.input)
        ccr = to_ccr(prices)
        frame = pd.DataFrame({"date": ccr.dates, "ccr": ccr.values})
        outputs = [str(write_report(frame, "csv", output_dir / CCR_FILE))]

        if config.pair is not None:
            if config.day is None:
                raise ValidationError("Invalid value for 'day': a date is required to dump a pair series")
            outputs.append(str(self._dump_pair(ccr, config.pair, config.day, config.window, output_dir)))

        return {"outputs": outputs, "returns": len(ccr)}

    def _dump_pair(self, ccr, pair, day, window, output_dir: Path) -> Path:
        i = index_of(ccr, day)
        try:
            pairs = window_pairs(ccr, i, window)
        except DegenerateWindowError as e:
            raise ValidationError(f"Cannot dump pair series for {day}: {e}")

        selected = next(p for p in pairs if (p.i, p.j) == (pair[0], pair[1]))
        frame = pd.DataFrame(
            {
                "n": np.arange(selected.offset, selected.offset + selected.length),
                "x_i": selected.values[:, 0],
                "x_j": selected.values[:, 1],
            }
        )
        stamp = ccr.dates[i].strftime("%Y-%m-%d")
        self.logger.debug(f"Dumping pair ({selected.i}, {selected.j}) of {stamp}")
        return write_report(frame, "csv", output_dir / f"pair_{selected.i}_{selected.j}_{stamp}.csv")
