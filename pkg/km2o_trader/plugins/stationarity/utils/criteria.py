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
White-noise criteria on whitened pieces and the relaxed Test(S) verdict.

Each criterion has a scalar form taking one flattened xi and a vectorized
form taking a (pieces, T) matrix; the verdict only needs the pass rates.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from km2o_trader.core.constants import (
    DEFAULT_ORTHOGONALITY,
    LITERAL_DENOMINATOR_FLOOR,
    MEAN_BOUND,
    ORTHOGONALITY_BOUND,
    ORTHOGONALITY_MODES,
    ORTHOGONALITY_PAIR_RATE,
    PAIR_DIMENSION,
    RATE_THRESHOLD_MEAN,
    RATE_THRESHOLD_ORTHOGONALITY,
    RATE_THRESHOLD_VARIANCE,
    VARIANCE_BOUND,
)
from km2o_trader.core.exceptions import DegenerateWindowError, ValidationError
from km2o_trader.plugins.stationarity.utils.km2o import extract_pieces, levinson, sample_covariance


@dataclass(frozen=True)
class PairRates:
    """Pass rates of the three criteria over all pieces of one pair"""

    rate_mean: float
    rate_var: float
    rate_orth: float
    degenerate: bool = False

    def as_array(self) -> np.ndarray:
        return np.array([self.rate_mean, self.rate_var, self.rate_orth])


@dataclass(frozen=True)
class StationarityVerdict:
    rate_mean: float
    rate_var: float
    rate_orth: float
    passed: bool
    degenerate: bool


DEGENERATE_RATES = PairRates(math.nan, math.nan, math.nan, degenerate=True)


def piece_order(length: int, dimension: int = PAIR_DIMENSION) -> int:
    """M = floor(3 sqrt(l) / d) - 1"""
    return int(math.floor(3 * math.sqrt(length) / dimension)) - 1


def lag_budget(size: int) -> int:
    """Default orthogonality lag budget for a flattened xi of `size` values: min(floor(3 sqrt T), (T-1)//2)"""
    return min(int(math.floor(3 * math.sqrt(size))), (size - 1) // 2)


def rate_thresholds(alpha: float) -> Tuple[float, float, float]:
    """(mean, variance, orthogonality) rate thresholds relaxed by alpha"""
    if not 0 < alpha <= 1:
        raise ValidationError(f"Invalid value for 'alpha': {alpha} (must be in (0, 1])")
    return (
        RATE_THRESHOLD_MEAN * alpha,
        RATE_THRESHOLD_VARIANCE * alpha,
        RATE_THRESHOLD_ORTHOGONALITY * alpha,
    )


def mean_passes(xi: np.ndarray) -> np.ndarray:
    """sqrt(T) |mean xi| < 1.96, row-wise"""
    xi = np.atleast_2d(xi)
    return np.sqrt(xi.shape[1]) * np.abs(xi.mean(axis=1)) < MEAN_BOUND


def variance_statistic(xi: np.ndarray) -> np.ndarray:
    """sum(xi^2 - 1) / sqrt(sum((xi^2 - 1)^2)), defined as 0 when the denominator vanishes"""
    excess = np.atleast_2d(xi) ** 2 - 1.0
    numerator = excess.sum(axis=1)
    denominator = np.sqrt((excess**2).sum(axis=1))
    safe = np.where(denominator > 0, denominator, 1.0)
    return np.where(denominator > 0, numerator / safe, 0.0)


def variance_passes(xi: np.ndarray) -> np.ndarray:
    return np.abs(variance_statistic(xi)) < VARIANCE_BOUND


def block_counts(n: int, m: int, size: int) -> Tuple[int, int]:
    """
    (L1, L2) for lag n and start m over a flattened xi of `size` values.

    With size - 1 = q(2n) + r and m = u(2n) + t; results are clipped at zero.
    Unclipped, L1 + L2 = size - n - m.
    """
    q, r = divmod(size - 1, 2 * n)
    u, t = divmod(m, 2 * n)

    if r <= n:
        if t <= n - 1:
            first, second = n * (q + u) - m, n * (q - u - 1) + r + 1
        else:
            first, second = n * (q - u - 1), n * (q + u) + r + 1 - m
    else:
        if t <= n - 1:
            first, second = n * (q + u - 1) + r + 1 - m, n * (q - u)
        else:
            first, second = n * (q - u - 2) + r + 1, n * (q + u + 1) - m

    return max(first, 0), max(second, 0)


@lru_cache(maxsize=64)
def _orthogonality_layout(size: int, budget: int, mode: str) -> Tuple[Tuple[Tuple[int, np.ndarray], ...], int]:
    """Per lag n: the denominators D(n, m) for m = 0..budget-n (NaN when excluded); total usable pairs"""
    layout = []
    usable = 0
    for n in range(1, budget + 1):
        denominators = np.empty(budget - n + 1)
        for m in range(budget - n + 1):
            first, second = block_counts(n, m, size)
            if mode == "sum":
                value = math.sqrt(first) + math.sqrt(second)
            else:
                value = abs(math.sqrt(first) - math.sqrt(second))
            denominators[m] = value if value >= LITERAL_DENOMINATOR_FLOOR else math.nan
        usable += int(np.count_nonzero(~np.isnan(denominators)))
        denominators.setflags(write=False)
        layout.append((n, denominators))
    return tuple(layout), usable


def orthogonality_fraction(xi: np.ndarray, budget: Optional[int] = None, mode: str = DEFAULT_ORTHOGONALITY) -> np.ndarray:
    """
    Row-wise fraction of (n, m) pairs with T |R(n, m)| / D(n, m) < 1.96.

    R(n, m) = (1/T) sum_{k=m}^{T-1-n} xi(k) xi(k+n); NaN where no pair is usable.
    """
    if mode not in ORTHOGONALITY_MODES:
        raise ValidationError(f"Invalid value for 'orthogonality': {mode} (expected one of {ORTHOGONALITY_MODES})")

    xi = np.atleast_2d(xi)
    size = xi.shape[1]
    budget = lag_budget(size) if budget is None else budget
    if budget < 1 or 2 * budget >= size:
        raise ValidationError(f"Invalid value for 'lag_budget': {budget} (need 1 <= L and 2L < {size})")

    layout, usable = _orthogonality_layout(size, budget, mode)
    if usable == 0:
        return np.full(len(xi), math.nan)

    satisfied = np.zeros(len(xi))
    for n, denominators in layout:
        products = xi[:, : size - n] * xi[:, n:]
        # suffix[:, m] = sum_{k >= m} products[:, k]
        suffix = np.cumsum(products[:, ::-1], axis=1)[:, ::-1]
        statistic = np.abs(suffix[:, : len(denominators)]) / denominators
        satisfied += np.sum(statistic < ORTHOGONALITY_BOUND, axis=1)
    return satisfied / usable


def orthogonality_passes(xi: np.ndarray, budget: Optional[int] = None, mode: str = DEFAULT_ORTHOGONALITY) -> np.ndarray:
    """Satisfied fraction above 0.90; never true when no pair is usable"""
    fraction = orthogonality_fraction(xi, budget, mode)
    return np.where(np.isnan(fraction), False, fraction > ORTHOGONALITY_PAIR_RATE)


def criterion_mean(xi: np.ndarray) -> bool:
    return bool(mean_passes(np.asarray(xi, dtype=float))[0])


def criterion_variance(xi: np.ndarray) -> bool:
    return bool(variance_passes(np.asarray(xi, dtype=float))[0])


def criterion_orthogonality(xi: np.ndarray, budget: Optional[int] = None, mode: str = DEFAULT_ORTHOGONALITY) -> bool:
    return bool(orthogonality_passes(np.asarray(xi, dtype=float), budget, mode)[0])


@dataclass(frozen=True, eq=False)
class PieceOutcomes:
    """Per-piece criterion results of one pair (debug dumps)"""

    mean: np.ndarray
    variance: np.ndarray
    orthogonality: np.ndarray


def evaluate_pieces(values: np.ndarray, mode: str = DEFAULT_ORTHOGONALITY, budget: Optional[int] = None) -> PieceOutcomes:
    """
    Full Test(S) machinery for one pair series, per piece.

    Raises:
        ValidationError: series too short for its piece order
        DegenerateWindowError: covariance or KM2O system degenerate
    """
    values = np.asarray(values, dtype=float)
    length = len(values)
    order = piece_order(length, values.shape[1])
    if order < 1 or length < 2 * order + 4:
        raise ValidationError(f"Pair series of length {length} too short for Test(S) (piece order {order})")

    system = levinson(sample_covariance(values, order), order)
    xi = extract_pieces(values, system).xi
    return PieceOutcomes(
        mean=mean_passes(xi),
        variance=variance_passes(xi),
        orthogonality=orthogonality_passes(xi, budget, mode),
    )


def window_pair_rates(values: np.ndarray, mode: str = DEFAULT_ORTHOGONALITY, budget: Optional[int] = None) -> PairRates:
    """Pass rates for one pair; degenerate systems give NaN rates and never pass"""
    try:
        outcomes = evaluate_pieces(values, mode, budget)
    except DegenerateWindowError:
        return DEGENERATE_RATES
    return PairRates(
        rate_mean=float(outcomes.mean.mean()),
        rate_var=float(outcomes.variance.mean()),
        rate_orth=float(outcomes.orthogonality.mean()),
    )


def verdict_from_rates(rates: PairRates, alpha: float) -> StationarityVerdict:
    if rates.degenerate:
        return StationarityVerdict(rates.rate_mean, rates.rate_var, rates.rate_orth, passed=False, degenerate=True)
    mean_threshold, variance_threshold, orthogonality_threshold = rate_thresholds(alpha)
    passed = (
        rates.rate_mean > mean_threshold
        and rates.rate_var > variance_threshold
        and rates.rate_orth > orthogonality_threshold
    )
    return StationarityVerdict(rates.rate_mean, rates.rate_var, rates.rate_orth, passed=passed, degenerate=False)


def test_s(
    values: np.ndarray,
    alpha: float,
    mode: str = DEFAULT_ORTHOGONALITY,
    budget: Optional[int] = None,
) -> StationarityVerdict:
    """
    Relaxed Test(S): passed iff rate_mean > 0.8 alpha, rate_var > 0.7 alpha
    and rate_orth > 0.8 alpha. alpha = 1 is the conventional test.
    """
    rate_thresholds(alpha)
    return verdict_from_rates(window_pair_rates(values, mode, budget), alpha)


test_s.__test__ = False  # not a pytest test function
