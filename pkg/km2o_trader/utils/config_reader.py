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
Run configuration for KM2O Trader.

Precedence: RunConfig defaults < config file < command-line flags.
The config file is flat `key=value` text (dotenv syntax) whose keys are
RunConfig field names.
"""

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from dotenv import dotenv_values

from km2o_trader.core.constants import (
    BACKTEST_MODES,
    DEFAULT_ALPHA,
    DEFAULT_LAMBDA1,
    DEFAULT_LAMBDA2,
    DEFAULT_N_MA,
    DEFAULT_N_PSY,
    DEFAULT_NMA_RANGE,
    DEFAULT_NPSY_SET,
    DEFAULT_ORTHOGONALITY,
    DEFAULT_START_PRICE,
    DEFAULT_WINDOW,
    MIN_WINDOW,
    ORTHOGONALITY_MODES,
    REGIME_SOURCES,
    SYNTH_KINDS,
)
from km2o_trader.core.exceptions import DataIOError, ValidationError
from km2o_trader.utils.logger import get_logger
from km2o_trader.utils.validators import validate_odd, validate_threshold_pair, validate_tool_arguments

logger = get_logger("config")

_NULLABLE_STRING = {"type": ["string", "null"]}

RUN_CONFIG_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "window": {"type": "integer", "minimum": MIN_WINDOW},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "lambda1": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "lambda2": {"type": "number", "minimum": 0, "maximum": 1},
        "n_ma": {"type": "integer", "minimum": 2},
        "n_psy": {"type": "integer", "minimum": 1},
        "allow_even_psy": {"type": "boolean"},
        "orthogonality": {"type": "string", "enum": list(ORTHOGONALITY_MODES)},
        "lag_budget": {"type": ["integer", "null"], "minimum": 1},
        "input": _NULLABLE_STRING,
        "output_dir": {"type": "string", "minLength": 1},
        "output": _NULLABLE_STRING,
        "regimes": _NULLABLE_STRING,
        "seed": {"type": "integer", "minimum": 0},
        "synth_kind": {"type": "string", "enum": list(SYNTH_KINDS)},
        "length": {"type": "integer", "minimum": 2},
        "mu": {"type": "number"},
        "sigma": {"type": "number", "minimum": 0},
        "sigma_before": {"type": "number", "exclusiveMinimum": 0},
        "sigma_after": {"type": "number", "exclusiveMinimum": 0},
        "switch_day": {"type": "integer", "minimum": 1},
        "start_price": {"type": "number", "exclusiveMinimum": 0},
        "mode": {"type": "string", "enum": list(BACKTEST_MODES)},
        "regime_source": {"type": "string", "enum": list(REGIME_SOURCES)},
        "nma_min": {"type": "integer", "minimum": 2},
        "nma_max": {"type": "integer", "minimum": 2},
        "npsy_set": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "alphas": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
            "minItems": 1,
        },
        "workers": {"type": "integer", "minimum": 1},
        "debug_dump": {"type": "boolean"},
        "pair": {
            "type": ["array", "null"],
            "items": {"type": "integer", "minimum": 0, "maximum": 18},
            "minItems": 2,
            "maxItems": 2,
        },
        "day": _NULLABLE_STRING,
        "classification": _NULLABLE_STRING,
        "equity": _NULLABLE_STRING,
    },
}

_TRUE_STRINGS = ("1", "true", "yes", "on")
_FALSE_STRINGS = ("0", "false", "no", "off")


def default_alphas() -> List[float]:
    return [round(0.05 * k, 2) for k in range(1, 21)]


@dataclass
class RunConfig:
    """Every tunable of a run; field names double as config-file keys and tool arguments"""

    window: int = DEFAULT_WINDOW
    alpha: float = DEFAULT_ALPHA
    lambda1: float = DEFAULT_LAMBDA1
    lambda2: float = DEFAULT_LAMBDA2
    n_ma: int = DEFAULT_N_MA
    n_psy: int = DEFAULT_N_PSY
    allow_even_psy: bool = False
    orthogonality: str = DEFAULT_ORTHOGONALITY
    lag_budget: Optional[int] = None
    input: Optional[str] = None
    output_dir: str = "."
    output: Optional[str] = None
    regimes: Optional[str] = None
    seed: int = 0
    synth_kind: str = "gaussian-walk"
    length: int = 1000
    mu: float = 0.0
    sigma: float = 0.01
    sigma_before: float = 0.01
    sigma_after: float = 0.05
    switch_day: int = 500
    start_price: float = DEFAULT_START_PRICE
    mode: str = "full"
    regime_source: str = "proposed"
    nma_min: int = DEFAULT_NMA_RANGE[0]
    nma_max: int = DEFAULT_NMA_RANGE[1]
    npsy_set: List[int] = field(default_factory=lambda: list(DEFAULT_NPSY_SET))
    alphas: List[float] = field(default_factory=default_alphas)
    workers: int = 1
    debug_dump: bool = False
    pair: Optional[List[int]] = None
    day: Optional[str] = None
    classification: Optional[str] = None
    equity: Optional[str] = None

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "RunConfig":
        """
        Build and validate a RunConfig from already typed values.

        Raises:
            ValidationError: naming the offending field
        """
        merged = asdict(cls())
        merged.update(values)
        validate_tool_arguments(merged, RUN_CONFIG_SCHEMA)
        config = cls(**merged)
        config.check()
        return config

    def check(self) -> None:
        """Cross-field rules the schema cannot express"""
        problems = [
            validate_threshold_pair(self.lambda1, self.lambda2),
            validate_odd("n_psy", self.n_psy, self.allow_even_psy),
        ]
        problems.extend(validate_odd("npsy_set", value, self.allow_even_psy) for value in self.npsy_set)

        if self.nma_min > self.nma_max:
            problems.append(f"Invalid value for 'nma_min': {self.nma_min} exceeds nma_max {self.nma_max}")
        if self.synth_kind == "variance-switch" and not 0 < self.switch_day < self.length:
            problems.append(
                f"Invalid value for 'switch_day': must satisfy 0 < switch_day < length ({self.length})"
            )
        if self.pair is not None and not self.pair[0] < self.pair[1]:
            problems.append(f"Invalid value for 'pair': expected i < j, got {self.pair[0]},{self.pair[1]}")

        problems = [p for p in problems if p]
        if problems:
            raise ValidationError(problems[0])

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def coerce_value(name: str, raw: Optional[str]) -> Any:
    """
    Convert a config-file string to the type its schema declares.

    Raises:
        ValidationError: unknown key or unparseable value
    """
    spec = RUN_CONFIG_SCHEMA["properties"].get(name)
    if spec is None:
        raise ValidationError(f"Unknown config key '{name}'")

    types = spec["type"] if isinstance(spec["type"], list) else [spec["type"]]
    text = "" if raw is None else raw.strip()

    if "null" in types and text.lower() in ("", "none", "null"):
        return None

    try:
        if "boolean" in types:
            if text.lower() in _TRUE_STRINGS:
                return True
            if text.lower() in _FALSE_STRINGS:
                return False
            raise ValueError(text)
        if "integer" in types:
            return int(text)
        if "number" in types:
            return float(text)
        if "array" in types:
            item_type = int if spec["items"]["type"] == "integer" else float
            return [item_type(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"Invalid value for '{name}': cannot parse '{text}'")

    return text


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Parse a flat key=value config file into typed values.

    Raises:
        DataIOError: file missing or unreadable
        ValidationError: unknown key or bad value
    """
    path = Path(path)
    if not path.is_file():
        raise DataIOError(f"Config file not found: {path}")

    try:
        raw_values = dotenv_values(path)
    except (OSError, UnicodeDecodeError) as e:
        raise DataIOError(f"Cannot read config file {path}: {e}")

    values = {}
    for key, raw in raw_values.items():
        values[key.strip().lower()] = coerce_value(key.strip().lower(), raw)

    logger.debug(f"Read {len(values)} settings from {path}")
    return values


def load_config(
    config_path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """
    Merge defaults, an optional config file and explicit overrides.

    Overrides whose value is None are treated as "not given".
    """
    values: Dict[str, Any] = {}
    if config_path:
        values.update(read_config_file(config_path))
    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig.from_mapping(values)
