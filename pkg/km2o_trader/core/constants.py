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
Constants for KM2O Trader.
Centralized defaults, statistical thresholds, and file names.
"""

# Window and stationarity defaults
DEFAULT_WINDOW = 100
MIN_WINDOW = 20
DEFAULT_ALPHA = 0.5
TOTAL_PAIRS = 171
DEFAULT_LAMBDA1 = 165.5 / TOTAL_PAIRS
DEFAULT_LAMBDA2 = 100.5 / TOTAL_PAIRS
PAIR_DIMENSION = 2

# Test(S) rate thresholds before the alpha relaxation
RATE_THRESHOLD_MEAN = 0.80
RATE_THRESHOLD_VARIANCE = 0.70
RATE_THRESHOLD_ORTHOGONALITY = 0.80

# White-noise criteria bounds
MEAN_BOUND = 1.96
VARIANCE_BOUND = 2.2414
ORTHOGONALITY_BOUND = 1.96
ORTHOGONALITY_PAIR_RATE = 0.90
LITERAL_DENOMINATOR_FLOOR = 1e-9

# Numerical tolerances
PD_TOLERANCE = 1e-12

# Orthogonality denominator modes
ORTHOGONALITY_MODES = ("sum", "literal")
DEFAULT_ORTHOGONALITY = "sum"

# Strategy defaults
DEFAULT_N_MA = 10
DEFAULT_N_PSY = 9
DEFAULT_NMA_RANGE = (5, 30)
DEFAULT_NPSY_SET = (3, 5, 7, 9, 11)
BACKTEST_MODES = ("full", "rule2-only", "ma-only")
REGIME_SOURCES = ("proposed", "abn")

# Regime labels
REGIME_STATIONARY = "stationary"
REGIME_INTERMEDIATE = "intermediate"
REGIME_NON_STATIONARY = "non-stationary"
REGIME_UNCLASSIFIABLE = "unclassifiable"
REGIME_LABELS = (
    REGIME_STATIONARY,
    REGIME_INTERMEDIATE,
    REGIME_NON_STATIONARY,
    REGIME_UNCLASSIFIABLE,
)

# Synthetic data
SYNTH_KINDS = ("gaussian-walk", "variance-switch")
DEFAULT_START_PRICE = 10000.0

# Report formatting
REPORT_DECIMALS = 6
FLOAT_FORMAT = "%.6f"
INFINITY_SENTINEL = "inf"

# Output file names
CCR_FILE = "ccr.csv"
CLASSIFICATION_FILE = "classification.csv"
CLASSIFICATION_SUMMARY_FILE = "classification_summary.json"
REPORT_FILE = "backtest_report.json"
EQUITY_FILE = "equity.csv"
TRADES_FILE = "trades.csv"
SWEEP_FILE = "sweep.csv"
STATS_FILE = "stats.json"
ALPHA_SWEEP_FILE = "alpha_sweep.csv"
SYNTH_FILE = "synthetic.csv"
LAMBDA_CHART_FILE = "lambda.png"
EQUITY_CHART_FILE = "equity.png"
DEBUG_DIR = "debug"

# Environment
DEBUG_ENV_VAR = "KM2O_DEBUG"
CALIBRATION_ENV_VAR = "KM2O_RUN_CALIBRATION"

# CLI exit codes
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
