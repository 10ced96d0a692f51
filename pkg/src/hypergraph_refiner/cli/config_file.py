"""`key = value` 运行配置。

- `#` 之后为注释，空行忽略
- 未知键、重复键、格式错误与不变量违例均抛 ConfigError，并带上出错行号
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Any, Literal, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from hypergraph_refiner.application.exceptions import ConfigError
from hypergraph_refiner.application.services.dataset_service import TaskParams
from hypergraph_refiner.application.services.schedules import ScheduleKind, TrainConfig
from hypergraph_refiner.domain.services.sampling import PointDistribution
from hypergraph_refiner.domain.value_objects import TaskKind
from hypergraph_refiner.model.params import Sharing

_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

TASK_ALIASES: dict[str, tuple[TaskKind, int | None]] = {
    "hull3d": (TaskKind.HULL, 3),
    "hull": (TaskKind.HULL, None),
    "delaunay": (TaskKind.DELAUNAY, 2),
    "partition": (TaskKind.PARTITION, None),
}

ModelT = TypeVar("ModelT", bound=BaseModel)


def parse_key_values(text: str) -> dict[str, tuple[str, int]]:
    """返回 键 → (原始值, 行号)。"""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.partition("#")[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not _KEY.match(key):
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        if not value:
            raise ConfigError(f"missing value for '{key}'", line=lineno)
        if key in entries:
            raise ConfigError(f"duplicate key '{key}' (first set on line {entries[key][1]})", line=lineno)
        entries[key] = (value, lineno)
    return entries


def _line_for(error: dict[str, Any], entries: dict[str, tuple[str, int]]) -> int | None:
    loc = error.get("loc") or ()
    if loc and isinstance(loc[0], str) and loc[0] in entries:
        return entries[loc[0]][1]
    # 跨字段的不变量：取消息中提到的、最后出现的键
    mentioned = [
        line for key, (_, line) in entries.items() if re.search(rf"\b{re.escape(key)}\b", error.get("msg", ""))
    ]
    return max(mentioned) if mentioned else None


def validate_entries(model: type[ModelT], entries: dict[str, tuple[str, int]]) -> ModelT:
    try:
        return model.model_validate({key: value for key, (value, _) in entries.items()})
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ())) or "config"
        message = str(first.get("msg", "invalid value")).removeprefix("Value error, ")
        raise ConfigError(f"{where}: {message}", line=_line_for(dict(first), entries)) from None


def load_model(model: type[ModelT], path: Path) -> ModelT:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path} ({exc.strerror})") from None
    return validate_entries(model, parse_key_values(text))


class RunConfig(BaseModel):
    """训练运行配置；键名即配置文件中的写法。"""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    task: Literal["hull3d", "hull", "delaunay", "partition"] = "hull3d"
    dist: PointDistribution | None = None
    n: int | None = Field(default=None, ge=1)
    n_min: int | None = Field(default=None, ge=1)
    n_max: int | None = Field(default=None, ge=1)
    dim: int = Field(default=3, ge=1)
    d: int = Field(default=128, ge=1)
    k_max: int | Literal["auto"] = "auto"
    t_total: int = Field(default=16, ge=1, alias="T_total")
    t_bptt: int = Field(default=4, ge=1, alias="T_BPTT")
    n_bptt: int = Field(default=2, ge=1, alias="N_BPTT")
    schedule: ScheduleKind = ScheduleKind.SKIPS_RANDOM
    stride: int | None = Field(default=None, ge=1)
    sharing: Sharing = Sharing.RECURRENT
    supervise_all: bool = True
    lr: float = Field(default=3e-4, gt=0)
    epochs: int = Field(default=1000, ge=1)
    patience: int = Field(default=20, ge=0)
    seed: int = 0
    lambda_inc: float = Field(default=1.0, ge=0)
    lambda_exist: float = Field(default=1.0, ge=0)
    lambda_f1: float = Field(default=1.0, ge=0)
    train_data: Path = Path("train.hset")
    val_data: Path = Path("val.hset")
    test_data: Path | None = None
    count: int = Field(default=1000, ge=3, description="缺失数据文件时生成的总条数（80/10/10）")
    out_dir: Path = Path("run")
    threads: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check(self) -> RunConfig:
        if self.k_max != "auto" and self.k_max < 1:
            raise ValueError("k_max must be a positive integer or 'auto'")
        if self.n is not None and (self.n_min is not None or self.n_max is not None):
            raise ValueError("set either n or n_min/n_max, not both")
        if self.n_range() is not None:
            try:
                self.task_params()
            except ValidationError as exc:
                raise ValueError(str(exc.errors()[0]["msg"]).removeprefix("Value error, ")) from None
        try:
            self.train_config()
        except ValidationError as exc:
            raise ValueError(str(exc.errors()[0]["msg"]).removeprefix("Value error, ")) from None
        return self

    @property
    def task_kind(self) -> TaskKind:
        return TASK_ALIASES[self.task][0]

    @property
    def effective_dim(self) -> int:
        return TASK_ALIASES[self.task][1] or self.dim

    def n_range(self) -> tuple[int, int] | None:
        if self.n is not None:
            return self.n, self.n
        if self.n_min is None and self.n_max is None:
            return None
        low = self.n_min or self.n_max
        high = self.n_max or self.n_min
        assert low is not None and high is not None
        return low, high

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            schedule=self.schedule,
            t_total=self.t_total,
            t_bptt=self.t_bptt,
            n_bptt=self.n_bptt,
            stride=self.stride,
            supervise_all=self.supervise_all,
            lr=self.lr,
            epochs=self.epochs,
            patience=self.patience,
            seed=self.seed,
            lambda_inc=self.lambda_inc,
            lambda_exist=self.lambda_exist,
            lambda_f1=self.lambda_f1,
        )

    def task_params(self) -> TaskParams:
        """缺失的数据文件按此生成；未指定 dist 时 delaunay 取 unit_square。"""
        n_range = self.n_range()
        if n_range is None:
            raise ConfigError("n or n_min/n_max is required to generate data")
        dist = self.dist
        if dist is None:
            dist = PointDistribution.UNIT_SQUARE if self.task_kind is TaskKind.DELAUNAY else PointDistribution.SPHERE
        return TaskParams(
            task=self.task_kind, dist=dist, dim=self.effective_dim, n_min=n_range[0], n_max=n_range[1]
        )


def load_run_config(path: Path) -> RunConfig:
    return load_model(RunConfig, path)
