"""BPTT 调度：把 T_total 次迭代划分为若干反传窗口。

每个窗口 [start, end) 在磁带上前向 end − start 步，在 `supervised` 列出的迭代上计算损失，
反传一次并执行一次 Adam 更新；窗口之外的迭代不上磁带。
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from hypergraph_refiner.application.exceptions import ConfigError
from hypergraph_refiner.model.loss import LossWeights


class ScheduleKind(str, Enum):
    FULL = "full"
    TRUNCATED = "truncated"
    SKIPS_FIXED = "skips-fixed"
    SKIPS_RANDOM = "skips-random"

    @property
    def is_skips(self) -> bool:
        return self in (ScheduleKind.SKIPS_FIXED, ScheduleKind.SKIPS_RANDOM)


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    schedule: ScheduleKind = ScheduleKind.SKIPS_RANDOM
    t_total: int = Field(default=16, ge=1)
    t_bptt: int = Field(default=4, ge=1)
    n_bptt: int = Field(default=2, ge=1)
    stride: int | None = Field(default=None, ge=1, description="truncated 的步长，缺省为 T_BPTT")
    supervise_all: bool = Field(default=True, description="full 调度是否监督每一次迭代")
    lr: float = Field(default=3e-4, gt=0)
    epochs: int = Field(default=1000, ge=1)
    patience: int = Field(default=20, ge=0)
    seed: int = 0
    lambda_inc: float = Field(default=1.0, ge=0)
    lambda_exist: float = Field(default=1.0, ge=0)
    lambda_f1: float = Field(default=1.0, ge=0)

    @model_validator(mode="after")
    def _check_windows(self) -> TrainConfig:
        if self.schedule is ScheduleKind.FULL:
            return self
        if self.t_bptt > self.t_total:
            raise ValueError(f"T_BPTT={self.t_bptt} exceeds T_total={self.t_total}")
        if self.schedule.is_skips:
            if self.t_total % self.t_bptt:
                raise ValueError(f"T_total={self.t_total} is not divisible by T_BPTT={self.t_bptt}")
            blocks = self.t_total // self.t_bptt
            if self.n_bptt > blocks:
                raise ValueError(f"N_BPTT={self.n_bptt} exceeds T_total/T_BPTT={blocks}")
        if self.schedule is ScheduleKind.TRUNCATED and self.effective_stride > self.t_total:
            raise ValueError(f"stride={self.effective_stride} exceeds T_total={self.t_total}")
        return self

    @property
    def effective_stride(self) -> int:
        return self.stride if self.stride is not None else self.t_bptt

    @property
    def weights(self) -> LossWeights:
        return LossWeights(inc=self.lambda_inc, exist=self.lambda_exist, f1=self.lambda_f1)


@dataclass(frozen=True, slots=True)
class Window:
    start: int
    end: int
    supervised: tuple[int, ...]


def sample_windows(
    t_total: int,
    t_bptt: int,
    n_bptt: int,
    mode: ScheduleKind | str,
    rng: np.random.Generator,
) -> list[tuple[int, int]]:
    """把序列切成 B = T_total/T_BPTT 个块，按 fixed / random 规则选 N_BPTT 个。"""
    mode = ScheduleKind(mode)
    if not mode.is_skips:
        raise ConfigError(f"sample_windows needs a skips mode, got {mode.value}")
    if t_bptt < 1 or t_bptt > t_total or t_total % t_bptt:
        raise ConfigError(f"T_total={t_total} must be a positive multiple of T_BPTT={t_bptt}")
    blocks = t_total // t_bptt
    if not 1 <= n_bptt <= blocks:
        raise ConfigError(f"N_BPTT={n_bptt} must lie in [1, {blocks}]")
    if mode is ScheduleKind.SKIPS_FIXED:
        spacing = blocks // n_bptt
        chosen = [blocks - 1 - i * spacing for i in range(n_bptt)]
    else:
        chosen = rng.choice(blocks, size=n_bptt, replace=False).tolist()
    return [(b * t_bptt, (b + 1) * t_bptt) for b in sorted(chosen)]


def schedule_windows(config: TrainConfig, rng: np.random.Generator, *, final_only: bool = False) -> list[Window]:
    """final_only 用于 stacked 共享：只监督最后一步。"""
    t_total = config.t_total
    if config.schedule is ScheduleKind.FULL:
        if config.supervise_all and not final_only:
            return [Window(0, t_total, tuple(range(1, t_total + 1)))]
        return [Window(0, t_total, (t_total,))]
    if config.schedule is ScheduleKind.TRUNCATED:
        ends = range(config.effective_stride, t_total + 1, config.effective_stride)
        return [Window(max(0, end - config.t_bptt), end, (end,)) for end in ends]
    spans = sample_windows(t_total, config.t_bptt, config.n_bptt, config.schedule, rng)
    return [Window(start, end, (end,)) for start, end in spans]
