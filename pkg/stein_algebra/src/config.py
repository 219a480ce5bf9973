import logging
import os
from typing import Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from sympy import Rational

from stein_algebra.src.constants import DEFAULT_PRECISION_DIGITS, MIN_PRECISION_DIGITS, \
    DEFAULT_RELATIVE_TOLERANCE, DEFAULT_PROBE_POINTS, PRECISION_ENV_VAR, LOG_LEVEL_ENV_VAR, N_JOBS_ENV_VAR, \
    G_ORDER_BY_SUPPORT
from stein_algebra.src.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class EngineSettings(BaseModel):
    """
    Run-time settings of the engine. Exact computations never depend on them; they only steer the
    extended-precision layer, the Meijer-G order choice, progress bars and parallel row construction.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    precision_digits: int = Field(default=DEFAULT_PRECISION_DIGITS, ge=MIN_PRECISION_DIGITS)
    probe_points: Tuple[Rational, ...] = DEFAULT_PROBE_POINTS
    relative_tolerance: float = Field(default=DEFAULT_RELATIVE_TOLERANCE, gt=0, lt=1e-6)
    g_order_rule: Literal["support", "all_lower"] = G_ORDER_BY_SUPPORT
    n_jobs: int = 1
    show_progress: bool = False
    log_level: str = "WARNING"

    @field_validator("probe_points", mode="before")
    @classmethod
    def _parse_probe_points(cls, value):
        if isinstance(value, str):
            value = [item for item in value.split(",") if item.strip()]
        try:
            points = tuple(Rational(str(item).strip()) for item in value)
        except (TypeError, ValueError) as e:
            raise ValueError(f"probe points must be rationals: {e}")
        if not points:
            raise ValueError("at least one probe point is required")
        return points

    @field_validator("log_level")
    @classmethod
    def _check_log_level(cls, value: str) -> str:
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value}")
        return value


def _environment_overrides() -> dict:
    overrides = {}
    for field_name, var_name in (("precision_digits", PRECISION_ENV_VAR),
                                ("log_level", LOG_LEVEL_ENV_VAR),
                                ("n_jobs", N_JOBS_ENV_VAR)):
        if os.environ.get(var_name):
            overrides[field_name] = os.environ[var_name]
    return overrides


def load_settings(path: Optional[str] = None, **overrides) -> EngineSettings:
    """
    Loads the engine settings. Later sources win: defaults, the YAML file, the environment, explicit overrides.

    :param path: optional path of a YAML file with EngineSettings fields
    :param overrides: explicit field values (e.g. from command-line flags); None values are ignored
    :return: the validated settings
    """

    values = {}
    if path:
        try:
            with open(path, "r", encoding="utf8") as f:
                loaded = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(f"cannot read settings file {path}: {e}")
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"settings file {path} must contain a mapping")
        values.update(loaded)

    values.update(_environment_overrides())
    values.update({key: value for key, value in overrides.items() if value is not None})

    try:
        settings = EngineSettings(**values)
    except ValidationError as e:
        raise ConfigurationError(str(e))

    logger.debug("loaded settings: %s", settings)
    return settings


DEFAULT_SETTINGS = EngineSettings()
