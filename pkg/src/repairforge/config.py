import logging
import os
from pathlib import Path

import orjson
from pydantic import BaseModel, Field, PositiveInt, ValidationError

BRUTE_FORCE_HARD_CAP = 16


class Settings(BaseModel):
    """Resource guards shared by the enumeration and construction code."""
    max_facts: PositiveInt = Field(default=24)
    max_worlds: PositiveInt = Field(default=1_000_000)
    max_disjunctions: PositiveInt = Field(default=1_000_000)
    brute_force_cap: PositiveInt = Field(
        default=BRUTE_FORCE_HARD_CAP, le=BRUTE_FORCE_HARD_CAP
    )

    def with_overrides(self, **overrides: int | None) -> "Settings":
        """Returns a copy with every non-None override applied and re-validated."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Settings(**values)


class SettingsLoader:
    """Loads settings from a JSON file, falling back to defaults."""

    def __init__(self, file_path: Path):
        self._file_path = file_path
        self._settings = self._load_settings()

    def _load_settings(self) -> Settings:
        if not self._file_path.exists():
            return Settings()
        try:
            with self._file_path.open("rb") as f:
                data = orjson.loads(f.read())
                return Settings(**data)
        except (
            orjson.JSONDecodeError,
            TypeError,
            ValueError,
            ValidationError,
            OSError,
        ):
            logging.warning(
                "SettingsLoader: ignoring unreadable config %s", self._file_path
            )
            return Settings()

    @property
    def settings(self) -> Settings:
        return self._settings


def default_config_path() -> Path:
    env_path = os.environ.get("REPAIRFORGE_CONFIG")
    if env_path:
        return Path(env_path)
    return Path.home() / ".repairforge" / "config.json"


def log_level_from_env(default: str = "WARNING") -> int:
    name = os.environ.get("REPAIRFORGE_LOG", default).upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


# A single instance for the library to use.
config = SettingsLoader(default_config_path()).settings
