"""运行环境配置（基于 pydantic-settings）。

约定：
- 默认读取当前目录下的 .env（如存在）
- 环境变量覆盖 .env；命令行参数再覆盖环境变量
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from hypergraph_refiner.common.paths import default_data_dir

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR"}


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    data_dir: Path = Field(
        default_factory=default_data_dir,
        validation_alias="HSET_DATA_DIR",
        description="数据集与运行输出的默认根目录",
    )

    log_level: str = Field(
        default="INFO",
        validation_alias="LOG_LEVEL",
        description="日志级别（DEBUG/INFO/WARNING/ERROR）",
    )

    threads: int = Field(
        default=1,
        ge=1,
        validation_alias="HSET_THREADS",
        description="数据生成与评测的最大工作线程数（--threads 覆盖）",
    )

    @field_validator("log_level", mode="before")
    @classmethod
    def _normalize_log_level(cls, value: Any) -> str:
        if value is None:
            return "INFO"
        return str(value).upper().strip()

    @field_validator("log_level")
    @classmethod
    def _validate_log_level(cls, value: str) -> str:
        if value not in _LOG_LEVELS:
            raise ValueError(f"log_level must be one of {sorted(_LOG_LEVELS)}")
        return value

    def resolve(self, path: str | Path) -> Path:
        """相对路径按 data_dir 解析。"""
        candidate = Path(path)
        return candidate if candidate.is_absolute() else self.data_dir / candidate
