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
Command-line front end.

Every command is a tool of the plugin registry; flags are RunConfig fields.
Precedence: RunConfig defaults < --config file < flags.
Exit status: 0 success, 1 invalid input or other failure, 2 file I/O error.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, Optional, Sequence

from km2o_trader import __version__
from km2o_trader.core.constants import (
    BACKTEST_MODES,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    ORTHOGONALITY_MODES,
    REGIME_SOURCES,
    SYNTH_KINDS,
)
from km2o_trader.core.exceptions import DataIOError, TraderError, ValidationError
from km2o_trader.core.tool_registry import get_tool_registry
from km2o_trader.plugins.market_data.utils.reports import to_json_safe
from km2o_trader.utils.config_reader import coerce_value, load_config
from km2o_trader.utils.logger import cli_logger as logger
from km2o_trader.utils.logger import set_level

FLAG_NAMES = {"n_ma": "--nma", "n_psy": "--npsy", "synth_kind": "--kind"}
SWITCHES = ("allow_even_psy", "debug_dump")
CHOICES = {
    "orthogonality": ORTHOGONALITY_MODES,
    "mode": BACKTEST_MODES,
    "regime_source": REGIME_SOURCES,
    "synth_kind": SYNTH_KINDS,
}

HELP = {
    "input": "price CSV with date,close columns",
    "output_dir": "directory receiving the reports (default .)",
    "window": "window length N (default 100)",
    "alpha": "pass-rate relaxation in (0, 1] (default 0.5)",
    "lambda1": "stationary threshold (default 165.5/171)",
    "lambda2": "non-stationary threshold (default 100.5/171)",
    "orthogonality": "orthogonality denominator (default sum)",
    "lag_budget": "orthogonality lag budget L (default from piece length)",
    "workers": "worker processes (default 1)",
    "n_ma": "moving-average length (default 10)",
    "n_psy": "psychological-line length, odd (default 9)",
    "allow_even_psy": "permit even psychological-line lengths",
    "mode": "strategy variant (default full)",
    "regime_source": "classifier feeding the strategy (default proposed)",
    "regimes": "date,regime CSV used instead of the classifier",
    "nma_min": "smallest moving-average length (default 5)",
    "nma_max": "largest moving-average length (default 30)",
    "npsy_set": "comma-separated psychological-line lengths (default 3,5,7,9,11)",
    "alphas": "comma-separated alpha grid (default 0.05..1.00)",
    "synth_kind": "generator (default gaussian-walk)",
    "length": "number of days (default 1000)",
    "seed": "random seed (default 0)",
    "mu": "mean daily log-return (default 0)",
    "sigma": "daily log-return volatility (default 0.01)",
    "sigma_before": "volatility before the switch (default 0.01)",
    "sigma_after": "volatility from the switch day (default 0.05)",
    "switch_day": "day index of the volatility switch (default 500)",
    "start_price": "first close (default 10000)",
    "output": "target CSV (default <output-dir>/synthetic.csv)",
    "pair": "transform indices i,j of a pair series to dump",
    "day": "price date of the dumped window (YYYY-MM-DD)",
    "debug_dump": "dump per-pair and per-piece outcomes of one day",
    "classification": "classification.csv to chart",
    "equity": "equity.csv to chart",
}

STATIONARITY_FIELDS = ["window", "alpha", "lambda1", "lambda2", "orthogonality", "lag_budget", "workers"]
STRATEGY_FIELDS = ["n_ma", "n_psy", "allow_even_psy", "mode", "regime_source", "regimes"]

COMMANDS = {
    "synth": (
        "write a synthetic price series",
        ["synth_kind", "length", "seed", "mu", "sigma", "sigma_before", "sigma_after", "switch_day",
         "start_price", "output"],
    ),
    "transform": ("write daily log-returns, optionally dump a pair series", ["input", "window", "pair", "day"]),
    "classify": ("label each day by stationarity regime", ["input", *STATIONARITY_FIELDS, "debug_dump", "day"]),
    "stats": ("kurtosis, regime fractions and Test(ABN) summary", ["input", *STATIONARITY_FIELDS]),
    "alpha-sweep": ("rate of lambda = 1 across alpha values", ["input", *STATIONARITY_FIELDS, "alphas"]),
    "backtest": ("backtest the three-rule strategy", ["input", *STATIONARITY_FIELDS, *STRATEGY_FIELDS]),
    "sweep": (
        "backtest a (n_ma, n_psy) grid ranked by profit",
        ["input", *STATIONARITY_FIELDS, *STRATEGY_FIELDS, "nma_min", "nma_max", "npsy_set"],
    ),
    "plot": ("chart classification and equity outputs", ["input", "classification", "equity", "lambda1", "lambda2"]),
}


class TraderArgumentParser(argparse.ArgumentParser):
    """Usage errors raise ValidationError so they share exit status 1"""

    def error(self, message):
        raise ValidationError(message)


def _typed(field: str):
    def convert(raw: str) -> Any:
        return coerce_value(field, raw)

    convert.__name__ = field
    return convert


def _add_field(parser: argparse.ArgumentParser, field: str) -> None:
    flag = FLAG_NAMES.get(field, "--" + field.replace("_", "-"))
    if field in SWITCHES:
        parser.add_argument(flag, dest=field, action="store_const", const=True, default=None, help=HELP[field])
        return
    parser.add_argument(
        flag, dest=field, type=_typed(field), choices=CHOICES.get(field), default=None, help=HELP[field]
    )


def build_parser() -> TraderArgumentParser:
    parser = TraderArgumentParser(
        prog="km2o-trader",
        description="Stationarity regimes and rule-based trading on daily prices",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = TraderArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="key=value config file of RunConfig fields")
    common.add_argument("--output-dir", dest="output_dir", type=_typed("output_dir"), default=None,
                        help=HELP["output_dir"])
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="warnings and errors only")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for command, (help_text, fields) in COMMANDS.items():
        sub = subparsers.add_parser(command, parents=[common], help=help_text, description=help_text)
        for field in fields:
            _add_field(sub, field)
    return parser


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """RunConfig fields given on the command line"""
    skip = {"command", "config", "verbose", "quiet"}
    return {key: value for key, value in vars(args).items() if key not in skip and value is not None}


def run(command: str, arguments: Dict[str, Any]) -> Any:
    """
    Execute a command through the tool registry.

    Raises:
        ValidationError, DataIOError, TraderError
    """
    return get_tool_registry().execute_tool(get_tool_registry().tool_name_for(command), arguments)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        if args.verbose:
            set_level(logging.DEBUG)
        elif args.quiet:
            set_level(logging.WARNING)

        config = load_config(args.config, config_overrides(args))
        arguments = {key: value for key, value in config.as_dict().items() if value is not None}
        logger.debug(f"Running {args.command} with {arguments}")
        result = run(args.command, arguments)

    except ValidationError as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    except DataIOError as e:
        logger.error(str(e))
        return EXIT_IO
    except TraderError as e:
        logger.error(str(e))
        return EXIT_VALIDATION

    sys.stdout.write(json.dumps(to_json_safe(result), indent=2) + "\n")
    return EXIT_OK