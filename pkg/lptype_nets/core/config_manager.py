#!/usr/bin/env python3
"""
Configuration Manager for LP-type runs
Run parameters with per-model validation and JSON/YAML loading
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..models.coord_sim import PartitionScheme
from ..solvers.meta_solver import Mode

logger = logging.getLogger(__name__)

SEED_ENV = 'LPTYPE_SEED'


class Model(Enum):
    """Execution models."""
    RAM = "ram"
    STREAM = "stream"
    COORD = "coord"
    MPC = "mpc"


class TraceFormat(Enum):
    CSV = "csv"
    JSON = "json"


# Options that only make sense for one model
MODEL_ONLY = {
    'delta': Model.MPC,
    'memory_cap': Model.MPC,
    'k': Model.COORD,
    'scheme': Model.COORD,
}


def parse_fraction(value: Any) -> Fraction:
    """Accept ints, "p/q" strings and decimal strings; floats are refused."""
    if isinstance(value, float):
        raise ValueError(f"use an exact value such as '1/2' instead of the float {value}")
    return Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)


def default_seed() -> int:
    """Seed from LPTYPE_SEED, or 0."""
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == '':
        return 0
    try:
        return int(raw)
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", SEED_ENV, raw)
        return 0


def default_r(n: int) -> int:
    """⌈ln n⌉, at least 1."""
    return max(1, math.ceil(math.log(n))) if n > 1 else 1


@dataclass
class RunConfig:
    """Parameters of one solve run.

    Options that belong to a single model (δ for MPC, k for the coordinator,
    fused passes for streaming) are rejected for the others.
    """

    # Execution model
    model: Model = Model.RAM
    mode: Mode = Mode.LAS_VEGAS
    r: Optional[int] = None              # derived from δ for mpc
    delta: Optional[Fraction] = None     # mpc only, default 1/2
    k: Optional[int] = None              # coord only, default 2
    scheme: Optional[PartitionScheme] = None
    fused: bool = False                  # stream only

    # Randomness and sizes
    seed: int = field(default_factory=default_seed)
    net_scale: Fraction = Fraction(1)
    max_iterations: Optional[int] = None
    memory_cap: Optional[int] = None

    # Output
    oracle: bool = False
    record_timing: bool = False
    trace_format: Optional[TraceFormat] = None
    output: Optional[str] = None

    # Validation errors
    _validation_errors: List[str] = field(default_factory=list, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to a JSON-friendly dictionary."""
        return {
            'model': self.model.value,
            'mode': self.mode.value,
            'r': self.r,
            'delta': None if self.delta is None else str(self.delta),
            'k': self.k,
            'scheme': None if self.scheme is None else self.scheme.value,
            'fused': self.fused,
            'seed': self.seed,
            'net_scale': str(self.net_scale),
            'max_iterations': self.max_iterations,
            'memory_cap': self.memory_cap,
            'oracle': self.oracle,
            'record_timing': self.record_timing,
            'trace_format': None if self.trace_format is None else self.trace_format.value,
            'output': self.output,
        }

    def from_dict(self, config_dict: Dict[str, Any]) -> None:
        """Load values from a dictionary, collecting conversion errors.

        Args:
            config_dict: Keys as produced by ``to_dict``; unknown keys are
                reported.
        """
        self._validation_errors.clear()
        enums = {'model': Model, 'mode': Mode, 'scheme': PartitionScheme,
                 'trace_format': TraceFormat}
        for key, value in config_dict.items():
            if key.startswith('_') or not hasattr(self, key):
                self._validation_errors.append(f"Unknown configuration key: {key}")
                continue
            if value is None:
                setattr(self, key, None if key not in ('fused', 'oracle', 'record_timing') else False)
                continue
            try:
                if key in enums:
                    value = enums[key](value)
                elif key in ('delta', 'net_scale'):
                    value = parse_fraction(value)
                elif key in ('r', 'k', 'seed', 'max_iterations', 'memory_cap'):
                    if isinstance(value, bool) or int(value) != value:
                        raise ValueError(f"{value!r} is not an integer")
                    value = int(value)
                elif key in ('fused', 'oracle', 'record_timing'):
                    if not isinstance(value, bool):
                        raise ValueError(f"{value!r} is not true/false")
            except (ValueError, TypeError, ZeroDivisionError) as e:
                self._validation_errors.append(f"Invalid {key}: {e}")
                continue
            setattr(self, key, value)

    def validate(self) -> List[str]:
        """Range and per-model checks.

        Returns:
            List[str]: Validation error messages (empty when valid)
        """
        errors: List[str] = list(self._validation_errors)

        for key, owner in MODEL_ONLY.items():
            if getattr(self, key) is not None and self.model is not owner:
                errors.append(f"{key} only applies to model {owner.value}")
        if self.fused and self.model is not Model.STREAM:
            errors.append("fused only applies to model stream")
        if self.r is not None and self.model is Model.MPC:
            errors.append("r is derived from delta for model mpc")

        if self.r is not None and self.r < 1:
            errors.append("r must be at least 1")
        if self.delta is not None and not 0 < self.delta <= 1:
            errors.append("delta must lie in (0, 1]")
        if self.k is not None and self.k < 1:
            errors.append("k must be at least 1")
        if self.net_scale <= 0:
            errors.append("net_scale must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            errors.append("max_iterations must be at least 1")
        if self.memory_cap is not None and self.memory_cap < 1:
            errors.append("memory_cap must be positive")
        if self.seed < 0:
            errors.append("seed must be nonnegative")
        return errors

    def get_validation_summary(self) -> Tuple[bool, List[str]]:
        errors = self.validate()
        return len(errors) == 0, errors

    def is_valid(self) -> bool:
        return len(self.validate()) == 0

    # Model parameters with defaults filled in

    def effective_r(self, n: int) -> int:
        return self.r if self.r is not None else default_r(n)

    def effective_delta(self) -> Fraction:
        return self.delta if self.delta is not None else Fraction(1, 2)

    def effective_k(self) -> int:
        return self.k if self.k is not None else 2

    def effective_scheme(self) -> PartitionScheme:
        return self.scheme if self.scheme is not None else PartitionScheme.ROUND_ROBIN


class ConfigManager:
    """Holds the active run configuration and moves it to and from files."""

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or RunConfig()
        self.loaded = config is not None

    def load(self, path: str) -> RunConfig:
        self.config = load_config_from_path(path)
        self.loaded = True
        logger.info("loaded configuration from %s", path)
        return self.config

    def save(self, path: str) -> bool:
        """Write the configuration as JSON."""
        try:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(self.config.to_dict(), f, indent=2)
            logger.info("configuration saved to %s", path)
            return True
        except OSError as e:
            logger.error("cannot save configuration to %s: %s", path, e)
            return False


def read_mapping(path: str) -> Dict[str, Any]:
    """Read a JSON or YAML mapping.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the format is unsupported or the content is invalid.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file not found: {path}")

    ext = os.path.splitext(path)[1].lower()

    if ext == '.json':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in config file: {e}") from e
    elif ext in ('.yaml', '.yml'):
        try:
            import yaml
        except ImportError:
            raise ValueError(
                "YAML config files require PyYAML. Install with: pip install pyyaml"
            ) from None
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)
        except Exception as e:
            raise ValueError(f"Invalid YAML in config file: {e}") from e
        if data is None:
            data = {}
    else:
        raise ValueError(
            f"Unsupported config format: '{ext}'. Use .json, .yaml, or .yml"
        )

    if not isinstance(data, dict):
        raise ValueError("Config file must contain a mapping at the top level")
    return data


def load_config_from_path(path: str) -> RunConfig:
    """Load a run configuration from a JSON or YAML file.

    Args:
        path: Path to config file (.json, .yaml, or .yml).

    Returns:
        RunConfig: Configuration populated from the file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the format is unsupported, or the file content is invalid.
    """
    config = RunConfig()
    config.from_dict(read_mapping(path))
    is_valid, errors = config.get_validation_summary()
    if not is_valid:
        raise ValueError("; ".join(errors))
    return config
