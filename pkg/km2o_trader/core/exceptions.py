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
Exception hierarchy for KM2O Trader.
"""


class TraderError(Exception):
    """Base exception"""

    pass


class ValidationError(TraderError):
    """Invalid configuration, input data, or violated precondition"""

    pass


class InsufficientHistoryError(ValidationError):
    """Not enough past observations for the requested day"""

    pass


class DegenerateWindowError(TraderError):
    """Window with zero sample variance; the day cannot be classified"""

    pass


class DataIOError(TraderError):
    """File could not be read or written"""

    pass
