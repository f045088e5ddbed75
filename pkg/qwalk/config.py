from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Config(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="QWALK_")

    threads: int = Field(0, ge=0)
    debug: bool = False
    log_file: Path | None = None

    @property
    def max_workers(self) -> int | None:
        """Thread pool size, ``None`` leaves the choice to the executor."""
        return self.threads or None
