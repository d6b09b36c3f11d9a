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
Stationarity Plugin Utilities

- transforms: CCR conversion, window normalization, nonlinear transforms, pair series
- km2o: sample covariance, KM2O-Langevin matrix system, whitened pieces
- criteria: white-noise criteria and the relaxed Test(S) verdict
- classifier: per-day lambda, regime labels, Test(ABN) baseline, kurtosis
"""
