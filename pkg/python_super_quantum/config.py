# config.py
"""Settings for the command line, read from superq_config.yaml.

``SUPERQ_CONFIG`` points at another file and ``SUPERQ_LOG_LEVEL`` overrides
the logging level; both may come from a ``.env`` file.
"""
from pathlib import Path
from typing import List, Optional, Union
import logging
import os

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from python_super_quantum.errors import InputError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).with_name("superq_config.yaml")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class SearchSettings(BaseModel):
    dim: int = Field(3, ge=3, le=6)
    trials: int = Field(2000, ge=1)
    seed: int = 7
    refine_steps: int = Field(40, ge=0)
    max_retries: int = Field(20, ge=0)


class InterferenceSettings(BaseModel):
    dims: List[int] = [3, 4, 5, 6]
    samples: int = Field(1000, ge=1)
    seed: int = 1
    witness_grid_steps: int = Field(6, ge=2)

    @field_validator("dims")
    @classmethod
    def _dims_in_range(cls, dims: List[int]) -> List[int]:
        if not dims or any(not 3 <= d <= 6 for d in dims):
            raise ValueError("interference dims must be between 3 and 6")
        return dims


class ChshSettings(BaseModel):
    grid_steps: int = Field(16, ge=2)


class ReportSettings(BaseModel):
    float_digits: int = Field(12, ge=1, le=17)


class LoggingSettings(BaseModel):
    level: str = "WARNING"

    @field_validator("level")
    @classmethod
    def _known_level(cls, level: str) -> str:
        level = level.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"logging level must be one of {', '.join(LOG_LEVELS)}")
        return level


class Settings(BaseModel):
    search: SearchSettings = SearchSettings()
    interference: InterferenceSettings = InterferenceSettings()
    chsh: ChshSettings = ChshSettings()
    report: ReportSettings = ReportSettings()
    logging: LoggingSettings = LoggingSettings()


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """Read settings from ``path``, ``$SUPERQ_CONFIG`` or the bundled file.

    A missing file falls back to the defaults; a malformed one is an input error.
    """
    load_dotenv()
    chosen = Path(path or os.getenv("SUPERQ_CONFIG") or DEFAULT_CONFIG_PATH)
    try:
        with open(chosen, 'r') as f:
            raw = yaml.safe_load(f) or {}
        logger.info(f"Loaded configuration from {chosen}")
    except FileNotFoundError:
        logger.warning(f"No config file at {chosen}, using defaults")
        raw = {}
    except yaml.YAMLError as e:
        raise InputError(f"Cannot read config {chosen}: {e}") from e
    if not isinstance(raw, dict):
        raise InputError(f"Config {chosen} must be a mapping")

    settings = _validate(raw, f"config {chosen}")
    env_level = os.getenv("SUPERQ_LOG_LEVEL")
    if env_level:
        merged = settings.model_dump()
        merged["logging"]["level"] = env_level
        settings = _validate(merged, "SUPERQ_LOG_LEVEL")
    return settings


def _validate(raw: dict, source: str) -> Settings:
    try:
        return Settings.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first['loc'])
        raise InputError(f"Invalid {source}: {location}: {first['msg']}") from e
