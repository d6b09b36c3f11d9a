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
Per-day stationarity parameter lambda and regime labels.

Day index i counts CCR values; its window is x(i-N..i) and its lambda belongs
to price day i+1 (the close that completes x(i)). Rates are computed once per
day and can be thresholded for any alpha.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from km2o_trader.core.constants import (
    DEFAULT_ORTHOGONALITY,
    REGIME_INTERMEDIATE,
    REGIME_NON_STATIONARY,
    REGIME_STATIONARY,
    REGIME_UNCLASSIFIABLE,
    TOTAL_PAIRS,
)
from km2o_trader.core.exceptions import DegenerateWindowError, InsufficientHistoryError, ValidationError
from km2o_trader.plugins.market_data.utils.prices import PriceSeries
from km2o_trader.plugins.stationarity.utils.criteria import (
    evaluate_pieces,
    rate_thresholds,
    window_pair_rates,
)
from km2o_trader.plugins.stationarity.utils.transforms import (
    CcrSeries,
    apply_transforms,
    build_pairs,
    cut_window,
    normalize,
)
from km2o_trader.utils.logger import engine_logger as logger
from km2o_trader.utils.validators import validate_threshold_pair


@dataclass(frozen=True, eq=False)
class RateTable:
    """Pass rates per classifiable day: rates[day, pair, (mean, var, orth)], NaN for degenerate pairs"""

    dates: pd.DatetimeIndex
    ccr_index: np.ndarray
    rates: np.ndarray
    degenerate: np.ndarray
    window: int

    def passed(self, alpha: float) -> np.ndarray:
        """(days, 171) boolean verdicts at alpha; degenerate pairs never pass"""
        thresholds = np.array(rate_thresholds(alpha))
        with np.errstate(invalid="ignore"):
            return np.all(self.rates > thresholds, axis=2)

    def lambdas(self, alpha: float) -> "LambdaSeries":
        values = self.passed(alpha).sum(axis=1) / TOTAL_PAIRS
        values = np.where(self.degenerate, np.nan, values)
        return LambdaSeries(
            dates=self.dates,
            ccr_index=self.ccr_index,
            values=values,
            degenerate=self.degenerate.copy(),
            alpha=alpha,
        )


@dataclass(frozen=True, eq=False)
class LambdaSeries:
    """lambda per classifiable day in [0, 1] with denominator 171; NaN on degenerate days"""

    dates: pd.DatetimeIndex
    ccr_index: np.ndarray
    values: np.ndarray
    degenerate: np.ndarray
    alpha: float

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_values(cls, values: Sequence[float], alpha: float, dates: Optional[pd.DatetimeIndex] = None) -> "LambdaSeries":
        """Series from plain lambda values (NaN marks a degenerate day)"""
        values = np.asarray(values, dtype=float)
        if dates is None:
            dates = pd.bdate_range("2000-01-03", periods=len(values))
        return cls(
            dates=pd.DatetimeIndex(dates),
            ccr_index=np.arange(len(values)),
            values=values,
            degenerate=np.isnan(values),
            alpha=alpha,
        )


@dataclass(frozen=True, eq=False)
class RegimeSeries:
    dates: pd.DatetimeIndex
    labels: np.ndarray
    lambda1: float
    lambda2: float

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class AbnSpan:
    """Maximal run of lambda = 0; positions index the LambdaSeries"""

    start: int
    end: int
    start_date: pd.Timestamp
    end_date: pd.Timestamp

    @property
    def days(self) -> int:
        return self.end - self.start + 1


def _window_rates(task: Tuple[np.ndarray, int, str, Optional[int]]) -> Tuple[np.ndarray, bool]:
    """Worker: (171, 3) rates of one window, or NaNs with the degenerate flag"""
    raw, anchor, mode, budget = task
    try:
        pairs = build_pairs(apply_transforms(normalize(raw, anchor=anchor)))
    except DegenerateWindowError:
        return np.full((TOTAL_PAIRS, 3), np.nan), True
    return np.array([window_pair_rates(pair.values, mode, budget).as_array() for pair in pairs]), False


def classifiable_indices(ccr: CcrSeries, window: int) -> np.ndarray:
    """CCR indices i >= N"""
    if len(ccr) <= window:
        raise InsufficientHistoryError(
            f"Series too short: {len(ccr)} returns, window {window} needs at least {window + 1}"
        )
    return np.arange(window, len(ccr))


def compute_rates(
    ccr: CcrSeries,
    window: int,
    mode: str = DEFAULT_ORTHOGONALITY,
    budget: Optional[int] = None,
    workers: int = 1,
) -> RateTable:
    """
    Test(S) pass rates of all 171 pairs for every classifiable day.

    Days are independent; with workers > 1 they run in a process pool and are
    reassembled in day order.
    """
    indices = classifiable_indices(ccr, window)
    tasks = [(cut_window(ccr, int(i), window), int(i), mode, budget) for i in indices]
    logger.info(f"Computing Test(S) rates for {len(tasks)} days (window {window}, {mode} orthogonality)")

    if workers > 1 and len(tasks) > 1:
        chunksize = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_window_rates, tasks, chunksize=chunksize))
    else:
        results = [_window_rates(task) for task in tasks]

    degenerate = np.array([flag for _, flag in results], dtype=bool)
    if degenerate.any():
        logger.warning(f"{int(degenerate.sum())} degenerate windows marked unclassifiable")

    rates = np.stack([day_rates for day_rates, _ in results]) if results else np.empty((0, TOTAL_PAIRS, 3))
    return RateTable(
        dates=ccr.dates[indices],
        ccr_index=indices,
        rates=rates,
        degenerate=degenerate,
        window=window,
    )


def lambda_series(
    ccr: CcrSeries,
    window: int,
    alpha: float,
    mode: str = DEFAULT_ORTHOGONALITY,
    budget: Optional[int] = None,
    workers: int = 1,
) -> LambdaSeries:
    """lambda(i) = (pairs passing relaxed Test(S) at alpha) / 171 for i = N..end"""
    rate_thresholds(alpha)
    return compute_rates(ccr, window, mode, budget, workers).lambdas(alpha)


def classify(lambdas: LambdaSeries, lambda1: float, lambda2: float) -> RegimeSeries:
    """
    stationary iff lambda >= lambda1, intermediate iff lambda2 <= lambda < lambda1,
    non-stationary iff lambda < lambda2; degenerate days are unclassifiable.

    Raises:
        ValidationError: thresholds out of order
    """
    problem = validate_threshold_pair(lambda1, lambda2)
    if problem:
        raise ValidationError(problem)

    values = lambdas.values
    labels = np.full(len(values), REGIME_UNCLASSIFIABLE, dtype=object)
    valid = ~lambdas.degenerate
    with np.errstate(invalid="ignore"):
        labels[valid & (values >= lambda1)] = REGIME_STATIONARY
        labels[valid & (values >= lambda2) & (values < lambda1)] = REGIME_INTERMEDIATE
        labels[valid & (values < lambda2)] = REGIME_NON_STATIONARY
    return RegimeSeries(dates=lambdas.dates, labels=labels, lambda1=lambda1, lambda2=lambda2)


def abn_baseline(lambdas: LambdaSeries) -> List[AbnSpan]:
    """
    Test(ABN) non-stationary spans: maximal runs of lambda = 0.

    A run at the first classifiable day counts; degenerate days end a run.

    Raises:
        ValidationError: lambdas not computed at alpha = 1
    """
    if lambdas.alpha != 1:
        raise ValidationError(f"Test(ABN) needs lambdas at alpha = 1, got alpha = {lambdas.alpha}")

    zero = (~lambdas.degenerate) & (np.nan_to_num(lambdas.values, nan=1.0) == 0)
    spans = []
    start = None
    for position, is_zero in enumerate(zero):
        if is_zero and start is None:
            start = position
        elif not is_zero and start is not None:
            spans.append(_span(lambdas, start, position - 1))
            start = None
    if start is not None:
        spans.append(_span(lambdas, start, len(zero) - 1))
    return spans


def _span(lambdas: LambdaSeries, start: int, end: int) -> AbnSpan:
    return AbnSpan(start=start, end=end, start_date=lambdas.dates[start], end_date=lambdas.dates[end])


def regimes_from_abn(spans: Sequence[AbnSpan], lambdas: LambdaSeries) -> RegimeSeries:
    """Non-stationary inside Test(ABN) spans, intermediate elsewhere, unclassifiable on degenerate days"""
    labels = np.full(len(lambdas), REGIME_INTERMEDIATE, dtype=object)
    for span in spans:
        labels[span.start : span.end + 1] = REGIME_NON_STATIONARY
    labels[lambdas.degenerate] = REGIME_UNCLASSIFIABLE
    return RegimeSeries(dates=lambdas.dates, labels=labels, lambda1=1.0, lambda2=0.0)


def abn_contained(spans: Sequence[AbnSpan], regimes: RegimeSeries) -> List[bool]:
    """Per span: every day is intermediate or non-stationary under `regimes`"""
    flagged = np.isin(regimes.labels, (REGIME_INTERMEDIATE, REGIME_NON_STATIONARY))
    return [bool(flagged[span.start : span.end + 1].all()) for span in spans]


def align_to_prices(regimes: RegimeSeries, prices: PriceSeries) -> np.ndarray:
    """Labels per price day; days without a lambda are unclassifiable"""
    series = pd.Series(regimes.labels, index=regimes.dates)
    return series.reindex(prices.dates, fill_value=REGIME_UNCLASSIFIABLE).to_numpy(dtype=object)


def regime_fractions(regimes: RegimeSeries) -> dict:
    """Share of each regime over classifiable days (zeros when there are none)"""
    classifiable = regimes.labels[regimes.labels != REGIME_UNCLASSIFIABLE]
    total = len(classifiable)
    return {
        label: (float(np.count_nonzero(classifiable == label)) / total if total else 0.0)
        for label in (REGIME_STATIONARY, REGIME_INTERMEDIATE, REGIME_NON_STATIONARY)
    }


def excess_kurtosis(values: Sequence[float]) -> float:
    """
    Fourth standardized moment minus 3 (Gaussian reference 0).

    Raises:
        ValidationError: fewer than 4 values or zero variance
    """
    values = np.asarray(values, dtype=float)
    if len(values) < 4:
        raise ValidationError(f"Kurtosis needs at least 4 values, got {len(values)}")
    if np.ptp(values) == 0:
        raise ValidationError("Kurtosis undefined for a sample with zero variance")
    return float(stats.kurtosis(values, fisher=True, bias=True))


def day_detail(
    ccr: CcrSeries,
    i: int,
    window: int,
    alpha: float,
    mode: str = DEFAULT_ORTHOGONALITY,
    budget: Optional[int] = None,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Per-pair verdicts and per-piece criterion outcomes of one day (debug dumps).

    Raises:
        DegenerateWindowError: constant window
    """
    pairs = build_pairs(apply_transforms(normalize(cut_window(ccr, i, window), anchor=i)))
    thresholds = np.array(rate_thresholds(alpha))

    pair_rows = []
    piece_rows = []
    for pair in pairs:
        try:
            outcomes = evaluate_pieces(pair.values, mode, budget)
        except DegenerateWindowError:
            pair_rows.append(
                {"i": pair.i, "j": pair.j, "rate_mean": np.nan, "rate_var": np.nan, "rate_orth": np.nan,
                 "passed": False, "degenerate": True}
            )
            continue

        rates = np.array([outcomes.mean.mean(), outcomes.variance.mean(), outcomes.orthogonality.mean()])
        pair_rows.append(
            {"i": pair.i, "j": pair.j, "rate_mean": rates[0], "rate_var": rates[1], "rate_orth": rates[2],
             "passed": bool(np.all(rates > thresholds)), "degenerate": False}
        )
        for piece in range(len(outcomes.mean)):
            piece_rows.append(
                {"i": pair.i, "j": pair.j, "piece": piece, "mean": bool(outcomes.mean[piece]),
                 "variance": bool(outcomes.variance[piece]),
                 "orthogonality": bool(outcomes.orthogonality[piece])}
            )

    return pd.DataFrame(pair_rows), pd.DataFrame(piece_rows)
