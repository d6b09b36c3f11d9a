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
KM2O-Langevin matrix system of a stationary d-dimensional series.

The forward system (gamma_plus, V_plus) is the optimal linear predictor of
Z(n) from Z(0..n-1) and its error covariance; the backward system is the
mirror image needed by the recursion. Both come out of the multichannel
Levinson (Whittle) recursion on the sample covariance R(0..M).

    nu_plus(n) = Z(n) + sum_{k<n} gamma_plus(n, k) Z(k),  Cov nu_plus(n) = V_plus(n)
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.linalg import solve_triangular

from km2o_trader.core.constants import PD_TOLERANCE
from km2o_trader.core.exceptions import DegenerateWindowError, ValidationError

# Components whose spread is below this (relative to their magnitude) count as constant
_CONSTANT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class CovSequence:
    """R(n) = E[Z(k+n) Z(k)^T] for n = 0..max_lag, estimated from `length` samples"""

    matrices: np.ndarray
    length: int

    @property
    def max_lag(self) -> int:
        return len(self.matrices) - 1

    def at(self, n: int) -> np.ndarray:
        """R(n) with R(-n) = R(n)^T"""
        if abs(n) > self.max_lag:
            raise ValidationError(f"Covariance lag {n} beyond computed range {self.max_lag}")
        return self.matrices[n] if n >= 0 else self.matrices[-n].T


@dataclass(eq=False)
class Km2oSystem:
    """
    Forward and backward KM2O-Langevin matrices up to `order`.

    gamma_plus[n] has shape (n, d, d) indexed by k = 0..n-1; delta_plus[n] is
    gamma_plus[n][0] for n >= 1 (delta_plus[0] is zero). When the recursion
    meets a non positive-definite V, `degenerate` is set and arrays stop at
    the last valid order.
    """

    order: int
    gamma_plus: List[np.ndarray] = field(default_factory=list)
    gamma_minus: List[np.ndarray] = field(default_factory=list)
    delta_plus: List[np.ndarray] = field(default_factory=list)
    delta_minus: List[np.ndarray] = field(default_factory=list)
    v_plus: List[np.ndarray] = field(default_factory=list)
    v_minus: List[np.ndarray] = field(default_factory=list)
    degenerate: bool = False
    degenerate_order: Optional[int] = None


@dataclass(frozen=True, eq=False)
class WhitenedPieces:
    """
    Whitened fluctuation pieces.

    nu: (pieces, M+1, d) forward fluctuations; xi: (pieces, d(M+1)) whitened and
    flattened as (xi_1(0), xi_2(0), xi_1(1), ...).
    """

    nu: np.ndarray
    xi: np.ndarray

    @property
    def count(self) -> int:
        return len(self.xi)


def is_positive_definite(matrix: np.ndarray) -> bool:
    """Smallest eigenvalue above PD_TOLERANCE times the trace"""
    symmetric = 0.5 * (matrix + matrix.T)
    trace = float(np.trace(symmetric))
    if not np.isfinite(trace) or trace <= 0:
        return False
    return float(np.linalg.eigvalsh(symmetric)[0]) > PD_TOLERANCE * trace


def standardize(values: np.ndarray) -> np.ndarray:
    """
    Center each component and scale it to unit (population) variance.

    Raises:
        DegenerateWindowError: a component has zero variance
    """
    values = np.asarray(values, dtype=float)
    centered = values - values.mean(axis=0)
    scale = np.sqrt(np.mean(centered**2, axis=0))
    magnitude = np.maximum(np.max(np.abs(values), axis=0), 1.0)
    if np.any(scale <= _CONSTANT_TOLERANCE * magnitude):
        raise DegenerateWindowError("pair component with zero variance")
    return centered / scale


def sample_covariance(values: np.ndarray, max_lag: int) -> CovSequence:
    """
    R_ij(n) = (1/l) sum_{k=0}^{l-1-n} Z_i(k+n) Z_j(k) of the standardized series.

    Raises:
        ValidationError: series shorter than max_lag + 2
        DegenerateWindowError: zero component variance
    """
    values = np.asarray(values, dtype=float)
    length = len(values)
    if max_lag < 0 or length < max_lag + 2:
        raise ValidationError(f"Series of length {length} too short for covariance up to lag {max_lag}")

    z = standardize(values)
    matrices = np.empty((max_lag + 1, z.shape[1], z.shape[1]))
    for n in range(max_lag + 1):
        matrices[n] = z[n:].T @ z[: length - n] / length
    return CovSequence(matrices=matrices, length=length)


def levinson(cov: CovSequence, order: int) -> Km2oSystem:
    """
    Multichannel Levinson recursion (Whittle) for orders 0..order.

    Forward predictor Z(t) ~ sum_j A(j) Z(t-j), backward Z(t) ~ sum_j B(j) Z(t+j):
        D   = R(n+1) - sum_j A_n(j) R(n+1-j)
        K_f = D V_b^-1,  K_b = D^T V_f^-1
        A_{n+1}(j) = A_n(j) - K_f B_n(n+1-j),  A_{n+1}(n+1) = K_f
        B_{n+1}(j) = B_n(j) - K_b A_n(n+1-j),  B_{n+1}(n+1) = K_b
        V_f <- V_f - K_f D^T,  V_b <- V_b - K_b D
    gamma_plus(n, k) = -A_n(n-k), delta_plus(n) = -K_f, and symmetrically backward.
    """
    if order > cov.max_lag:
        raise ValidationError(f"Order {order} exceeds covariance lags {cov.max_lag}")

    r = cov.matrices
    dim = r.shape[1]
    system = Km2oSystem(order=order)

    v_forward = r[0].copy()
    v_backward = r[0].copy()
    if not is_positive_definite(v_forward):
        system.degenerate = True
        system.degenerate_order = 0
        return system

    zero = np.zeros((0, dim, dim))
    forward = zero
    backward = zero
    system.gamma_plus.append(zero)
    system.gamma_minus.append(zero)
    system.delta_plus.append(np.zeros((dim, dim)))
    system.delta_minus.append(np.zeros((dim, dim)))
    system.v_plus.append(v_forward)
    system.v_minus.append(v_backward)

    for n in range(order):
        delta = r[n + 1] - np.sum(forward @ r[n:0:-1], axis=0)
        k_forward = delta @ np.linalg.inv(v_backward)
        k_backward = delta.T @ np.linalg.inv(v_forward)

        forward, backward = (
            np.concatenate((forward - k_forward @ backward[::-1], k_forward[None]), axis=0),
            np.concatenate((backward - k_backward @ forward[::-1], k_backward[None]), axis=0),
        )
        v_forward = v_forward - k_forward @ delta.T
        v_backward = v_backward - k_backward @ delta

        if not (is_positive_definite(v_forward) and is_positive_definite(v_backward)):
            system.degenerate = True
            system.degenerate_order = n + 1
            return system

        system.gamma_plus.append(-forward[::-1])
        system.gamma_minus.append(-backward[::-1])
        system.delta_plus.append(-k_forward)
        system.delta_minus.append(-k_backward)
        system.v_plus.append(v_forward)
        system.v_minus.append(v_backward)

    return system


def whitening_factor(v: np.ndarray) -> np.ndarray:
    """
    Lower-triangular W with W W^T = V for a 2x2 V, in closed form.

    Raises:
        DegenerateWindowError: V11 <= 0 or det V <= 0
    """
    v11, v12, v22 = float(v[0, 0]), float(0.5 * (v[0, 1] + v[1, 0])), float(v[1, 1])
    determinant = v11 * v22 - v12 * v12
    if v11 <= 0 or determinant <= 0:
        raise DegenerateWindowError("fluctuation covariance is not positive definite")
    root = np.sqrt(v11)
    return np.array([[root, 0.0], [v12 / root, np.sqrt(determinant) / root]])


def extract_pieces(values: np.ndarray, system: Km2oSystem, standardize_input: bool = True) -> WhitenedPieces:
    """
    Cut the (standardized) series into l - M overlapping pieces of length M+1,
    form nu_plus with the global system and whiten each step with W(n)^-1.

    Raises:
        DegenerateWindowError: degenerate system or non positive-definite V_plus(n)
    """
    if system.degenerate:
        raise DegenerateWindowError(f"KM2O system degenerate at order {system.degenerate_order}")

    order = system.order
    z = standardize(values) if standardize_input else np.asarray(values, dtype=float)
    if len(z) < order + 1:
        raise ValidationError(f"Series of length {len(z)} shorter than piece length {order + 1}")

    # (pieces, M+1, d)
    pieces = np.swapaxes(sliding_window_view(z, order + 1, axis=0), 1, 2)
    nu = np.empty_like(pieces)
    xi = np.empty_like(pieces)

    for n in range(order + 1):
        nu[:, n, :] = pieces[:, n, :] + np.einsum("kij,pkj->pi", system.gamma_plus[n], pieces[:, :n, :])
        w = whitening_factor(system.v_plus[n])
        xi[:, n, :] = solve_triangular(w, nu[:, n, :].T, lower=True).T

    return WhitenedPieces(nu=nu, xi=xi.reshape(len(xi), -1))
