"""训练日志与评测结果的表格行。"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class EpochLogRow:
    epoch: int
    wall_seconds: float
    mean_loss: float
    val_f1: float
    max_grad_norm: float


@dataclass(frozen=True, slots=True)
class MetricsRow:
    task: str
    split: str
    n_min: int
    n_max: int
    precision: float
    recall: float
    f1: float
    accuracy: float | None = None  # 仅邻接任务
    ari: float | None = None  # 仅划分任务
    ri: float | None = None
