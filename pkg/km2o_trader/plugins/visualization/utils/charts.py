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
PNG charts of regimes and backtest equity (matplotlib, Agg backend).
"""

from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from km2o_trader.core.constants import REGIME_INTERMEDIATE, REGIME_NON_STATIONARY  # noqa: E402
from km2o_trader.core.exceptions import DataIOError, ValidationError  # noqa: E402
from km2o_trader.plugins.market_data.utils.prices import PriceSeries  # noqa: E402
from km2o_trader.utils.logger import get_logger  # noqa: E402

logger = get_logger("charts")

PathLike = Union[str, Path]

REGIME_SHADES = {
    REGIME_NON_STATIONARY: ("tab:blue", "non-stationary"),
    REGIME_INTERMEDIATE: ("tab:red", "intermediate"),
}
FIGURE_SIZE = (12, 7)
DPI = 100


def read_table(path: PathLike, required: tuple) -> pd.DataFrame:
    """
    CSV report with a `date` column parsed to timestamps.

    Raises:
        DataIOError: file missing or unreadable
        ValidationError: required column missing
    """
    try:
        frame = pd.read_csv(path, keep_default_na=True)
    except FileNotFoundError:
        raise DataIOError(f"File not found: {path}")
    except (OSError, UnicodeDecodeError, pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise DataIOError(f"Cannot read {path}: {e}")

    for column in required:
        if column not in frame.columns:
            raise ValidationError(f"Missing required column '{column}' in {path}")
    frame["date"] = pd.to_datetime(frame["date"], format="ISO8601")
    return frame


def _regime_runs(labels: np.ndarray, regime: str):
    """(first, last) positions of maximal runs of `regime`"""
    flags = np.concatenate(([False], labels == regime, [False])).astype(int)
    edges = np.diff(flags)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    return list(zip(starts, ends))


def _save(fig, path: PathLike) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(target, format="png", bbox_inches="tight", facecolor="white")
    except OSError as e:
        raise DataIOError(f"Cannot write chart {target}: {e}")
    finally:
        plt.close(fig)
    logger.debug(f"Wrote chart {target}")
    return target


def plot_lambda(
    prices: PriceSeries,
    classification: pd.DataFrame,
    path: PathLike,
    lambda1: Optional[float] = None,
    lambda2: Optional[float] = None,
) -> Path:
    """
    Closing prices above the lambda series; non-stationary days shaded blue,
    intermediate days red. `classification` has date, lambda, regime columns.
    """
    frame = classification.sort_values("date")
    dates = pd.DatetimeIndex(frame["date"])
    labels = frame["regime"].astype(str).to_numpy()

    fig, (price_ax, lambda_ax) = plt.subplots(
        2, 1, figsize=FIGURE_SIZE, dpi=DPI, sharex=True, gridspec_kw={"height_ratios": [2, 1]}
    )
    price_ax.plot(prices.dates, prices.closes, color="black", linewidth=0.8)
    price_ax.set_ylabel("close")
    lambda_ax.plot(dates, frame["lambda"], color="tab:green", linewidth=0.8)
    lambda_ax.set_ylabel("lambda")
    lambda_ax.set_ylim(-0.02, 1.02)

    for threshold in (lambda1, lambda2):
        if threshold is not None:
            lambda_ax.axhline(threshold, color="grey", linestyle="--", linewidth=0.7)

    for regime, (color, _) in REGIME_SHADES.items():
        for first, last in _regime_runs(labels, regime):
            for ax in (price_ax, lambda_ax):
                ax.axvspan(dates[first], dates[last], color=color, alpha=0.2, linewidth=0)

    price_ax.legend(
        handles=[Patch(color=color, alpha=0.2, label=label) for color, label in REGIME_SHADES.values()],
        loc="upper left",
    )
    price_ax.set_title("Closing price and stationarity parameter")
    fig.autofmt_xdate()
    return _save(fig, path)


def plot_equity(equity: pd.DataFrame, path: PathLike) -> Path:
    """Mark-to-market and realized equity from an equity CSV frame"""
    fig, ax = plt.subplots(figsize=FIGURE_SIZE, dpi=DPI)
    ax.plot(equity["date"], equity["equity"], label="mark-to-market", linewidth=0.9)
    if "realized" in equity.columns:
        ax.plot(equity["date"], equity["realized"], label="realized", linewidth=0.9, linestyle="--")
    ax.axhline(0.0, color="grey", linewidth=0.5)
    ax.set_ylabel("cumulative pnl")
    ax.set_title("Strategy equity")
    ax.legend(loc="upper left")
    fig.autofmt_xdate()
    return _save(fig, path)
