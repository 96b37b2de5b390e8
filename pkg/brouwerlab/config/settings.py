"""
brouwerlab configuration
YAML defaults layered under BROUWERLAB_* environment variables
"""
import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple, Type

import yaml
from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from brouwerlab.exceptions import ConfigurationError

DEFAULT_SETTINGS_PATH = Path(__file__).with_name("settings.yaml")


class LoggingSettings(BaseModel):
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"
    format: Literal["json", "text"] = "json"


class ToleranceSettings(BaseModel):
    check_scale: float = Field(default=1e-7, gt=0)
    eig_scale: float = Field(default=1e-9, gt=0)
    trace_scale: float = Field(default=1e-9, gt=0)
    confirm_factor: float = Field(default=100.0, gt=0)


class SpectralSettings(BaseModel):
    max_sweeps: int = Field(default=50, ge=1)


class ExperimentSettings(BaseModel):
    workers: int = Field(default=1, ge=1)
    master_seed: int = Field(default=0, ge=0)
    chunk_size: int = Field(default=16, ge=1)
    start_method: Optional[Literal["fork", "spawn", "forkserver"]] = None


class EnumerationSettings(BaseModel):
    default_cap: int = Field(default=6, ge=1)
    hard_cap: int = Field(default=7, ge=1, le=7)
    checkpoint_every: int = Field(default=4096, ge=1)


class BoundsSettings(BaseModel):
    lemma5_c: float = Field(default=0.45, gt=0, lt=0.5)


class LabSettings(BaseSettings):
    """Resolved configuration for one process"""

    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    tolerances: ToleranceSettings = Field(default_factory=ToleranceSettings)
    spectral: SpectralSettings = Field(default_factory=SpectralSettings)
    experiments: ExperimentSettings = Field(default_factory=ExperimentSettings)
    enumeration: EnumerationSettings = Field(default_factory=EnumerationSettings)
    bounds: BoundsSettings = Field(default_factory=BoundsSettings)

    model_config = SettingsConfigDict(
        env_prefix="BROUWERLAB_",
        env_nested_delimiter="__",
        env_file=".env",
        extra="ignore",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # YAML values arrive as init kwargs; the environment wins over them
        return env_settings, dotenv_settings, init_settings, file_secret_settings


def load_yaml(path: Path) -> Dict[str, Any]:
    """Read a settings YAML file"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise ConfigurationError(f"settings file not found: {path}", path=str(path))
    except yaml.YAMLError as e:
        raise ConfigurationError(f"invalid YAML in settings file: {e}", path=str(path))
    if not isinstance(data, dict):
        raise ConfigurationError("settings file must hold a mapping", path=str(path))
    return data


def load_settings(path: Optional[os.PathLike] = None) -> LabSettings:
    """Build settings from a YAML file plus environment overrides"""
    settings_path = Path(path) if path is not None else DEFAULT_SETTINGS_PATH
    data = load_yaml(settings_path)
    try:
        return LabSettings(**data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid settings: {e}", path=str(settings_path))


# Process-wide settings instance
_settings: Optional[LabSettings] = None


def get_settings() -> LabSettings:
    """Return the cached process settings"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def set_settings(settings: Optional[LabSettings]) -> None:
    """Replace (or clear, with None) the cached settings"""
    global _settings
    _settings = settings
