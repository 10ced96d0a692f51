"""桌面规模的实验脚本：每个实验生成数据、训练若干模型并产出一张表。"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from hypergraph_refiner.application.exceptions import UsageError
from hypergraph_refiner.application.services.dataset_service import TaskParams, generate_records
from hypergraph_refiner.application.services.evaluation_service import evaluate, task_mode
from hypergraph_refiner.application.services.schedules import ScheduleKind, TrainConfig
from hypergraph_refiner.application.services.training_service import (
    TrainResult,
    infer_k_max,
    train_run,
)
from hypergraph_refiner.config.logging import get_logger
from hypergraph_refiner.domain.services.sampling import PointDistribution
from hypergraph_refiner.domain.value_objects import ExampleRecord, TaskKind
from hypergraph_refiner.model.params import RefinerConfig, Sharing, param_count

logger = get_logger(__name__)


class ExperimentName(str, Enum):
    COMPLEXITY_SCALING = "complexity_scaling"
    RECURRENT_VS_STACKED = "recurrent_vs_stacked"
    BPTT_COMPARISON = "bptt_comparison"
    HIGHER_ORDER = "higher_order"
    EXTRAPOLATION = "extrapolation"


class ExperimentPlan(BaseModel):
    """桌面规模默认值：集合大小、样本数与轮数都远小于完整规模。"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scale: float = Field(default=0.1, gt=0, description="相对完整规模的缩放系数，只写入表头注释")
    seed: int = 0
    d: int = Field(default=32, ge=1)
    lr: float = Field(default=3e-4, gt=0)
    epochs: int = Field(default=20, ge=1)
    patience: int = Field(default=5, ge=0)
    train_count: int = Field(default=200, ge=1)
    val_count: int = Field(default=50, ge=1)
    test_count: int = Field(default=50, ge=1)
    threads: int = Field(default=1, ge=1)

    scaling_sizes: tuple[int, ...] = (10, 20, 30, 40, 50)
    scaling_iterations: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    base_iterations: int = 3
    match_tolerance: float = Field(default=0.02, ge=0)

    sharing_n: int = 10
    sharing_steps: tuple[int, ...] = (3, 4, 5, 6, 7, 8, 9)

    bptt_n: int = 10
    bptt_totals: tuple[int, ...] = (16, 32)
    t_bptt: int = 4

    higher_order_dim: int = 10
    higher_order_n: int = 13
    higher_order_t_total: int = 32
    higher_order_n_bptt: int = 4

    extrapolation_train_n: int = 10
    extrapolation_sizes: tuple[int, ...] = (10, 15, 20, 30)
    extrapolation_iterations: int = 15

    @field_validator(
        "scaling_sizes", "scaling_iterations", "sharing_steps", "bptt_totals", "extrapolation_sizes", mode="before"
    )
    @classmethod
    def _split_list(cls, value: Any) -> Any:
        # 配置文件里写作 "10, 20, 30"
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(",") if part.strip())
        return value

    def comment(self, name: ExperimentName) -> str:
        return (
            f"scale={self.scale} experiment={name.value} d={self.d} epochs={self.epochs} "
            f"train={self.train_count} val={self.val_count} test={self.test_count} seed={self.seed}"
        )


@dataclass(frozen=True, slots=True)
class ExperimentTable:
    name: ExperimentName
    header: tuple[str, ...]
    rows: list[tuple[Any, ...]]
    comment: str


@dataclass(frozen=True, slots=True)
class Splits:
    train: list[ExampleRecord]
    val: list[ExampleRecord]
    test: list[ExampleRecord]

    def k_max(self) -> int:
        return infer_k_max([*self.train, *self.val, *self.test])


class ExperimentRunner:
    def __init__(self, plan: ExperimentPlan) -> None:
        self._plan = plan

    def run(self, name: ExperimentName | str) -> ExperimentTable:
        try:
            experiment = ExperimentName(name)
        except ValueError:
            known = ", ".join(e.value for e in ExperimentName)
            raise UsageError(f"unknown experiment '{name}' (choose from {known})") from None
        handlers: dict[ExperimentName, Callable[[], list[tuple[Any, ...]]]] = {
            ExperimentName.COMPLEXITY_SCALING: self._complexity_scaling,
            ExperimentName.RECURRENT_VS_STACKED: self._recurrent_vs_stacked,
            ExperimentName.BPTT_COMPARISON: self._bptt_comparison,
            ExperimentName.HIGHER_ORDER: self._higher_order,
            ExperimentName.EXTRAPOLATION: self._extrapolation,
        }
        logger.info("experiment_started", experiment=experiment.value)
        rows = handlers[experiment]()
        return ExperimentTable(experiment, _HEADERS[experiment], rows, self._plan.comment(experiment))

    # 数据与训练 ---------------------------------------------------------------

    def _splits(self, params: TaskParams, offset: int) -> Splits:
        plan = self._plan
        base = plan.seed + 3 * offset

        def records(count: int, seed: int) -> list[ExampleRecord]:
            return [g.record for g in generate_records(params, count, seed, threads=plan.threads)]

        return Splits(
            records(plan.train_count, base),
            records(plan.val_count, base + 1),
            records(plan.test_count, base + 2),
        )

    def _hull(self, n: int, *, dim: int = 3, dist: PointDistribution = PointDistribution.SPHERE) -> TaskParams:
        return TaskParams(task=TaskKind.HULL, dist=dist, dim=dim, n_min=n, n_max=n)

    def _fit(
        self,
        splits: Splits,
        task: TaskParams,
        *,
        t_total: int,
        schedule: ScheduleKind = ScheduleKind.FULL,
        sharing: Sharing = Sharing.RECURRENT,
        n_bptt: int = 1,
        k_max: int | None = None,
    ) -> tuple[TrainResult, float]:
        plan = self._plan
        model = RefinerConfig(
            in_features=task.dim,
            d=plan.d,
            k_max=k_max or splits.k_max(),
            mode=task_mode(task.task),
            sharing=sharing,
            steps=t_total,
        )
        config = TrainConfig(
            schedule=schedule,
            t_total=t_total,
            t_bptt=min(plan.t_bptt, t_total),
            n_bptt=n_bptt,
            lr=plan.lr,
            epochs=plan.epochs,
            patience=plan.patience,
            seed=plan.seed,
        )
        result = train_run(splits.train, splits.val, model, config, threads=plan.threads)
        row = evaluate(splits.test, result.params, task.task, t_total, threads=plan.threads)
        return result, row.f1

    # 实验 ---------------------------------------------------------------------

    def _complexity_scaling(self) -> list[tuple[Any, ...]]:
        """每个 (n, 迭代次数) 单独训练；matches_base 标出达到基准性能（最小 n、3 次迭代）的组合。"""
        plan = self._plan
        results: list[tuple[int, int, float, int]] = []
        for offset, n in enumerate(plan.scaling_sizes):
            task = self._hull(n)
            splits = self._splits(task, offset)
            for t_total in plan.scaling_iterations:
                trained, f1 = self._fit(splits, task, t_total=t_total)
                results.append((n, t_total, f1, param_count(trained.params)))
        base = next(
            (f1 for n, t, f1, _ in results if n == plan.scaling_sizes[0] and t == plan.base_iterations),
            max(f1 for _, _, f1, _ in results),
        )
        return [(n, t, f1, count, f1 >= base - plan.match_tolerance) for n, t, f1, count in results]

    def _recurrent_vs_stacked(self) -> list[tuple[Any, ...]]:
        plan = self._plan
        task = self._hull(plan.sharing_n)
        splits = self._splits(task, 0)
        rows: list[tuple[Any, ...]] = []
        for steps in plan.sharing_steps:
            for sharing in Sharing:
                trained, f1 = self._fit(splits, task, t_total=steps, sharing=sharing)
                rows.append((sharing.value, steps, f1, param_count(trained.params)))
        return rows

    def _bptt_comparison(self) -> list[tuple[Any, ...]]:
        """skips 两种模式都跳过一半迭代：N_BPTT = T_total / (2·T_BPTT)。"""
        plan = self._plan
        task = self._hull(plan.bptt_n)
        splits = self._splits(task, 0)
        rows: list[tuple[Any, ...]] = []
        for t_total in plan.bptt_totals:
            half = max(1, t_total // (2 * plan.t_bptt))
            for schedule in ScheduleKind:
                trained, f1 = self._fit(splits, task, t_total=t_total, schedule=schedule, n_bptt=half)
                seconds = float(np.mean([row.wall_seconds for row in trained.log]))
                grad = max(row.max_grad_norm for row in trained.log)
                rows.append((schedule.value, t_total, seconds, f1, grad))
        return rows

    def _higher_order(self) -> list[tuple[Any, ...]]:
        plan = self._plan
        task = self._hull(plan.higher_order_n, dim=plan.higher_order_dim, dist=PointDistribution.GAUSSIAN)
        splits = self._splits(task, 0)
        trained, f1 = self._fit(
            splits,
            task,
            t_total=plan.higher_order_t_total,
            schedule=ScheduleKind.SKIPS_RANDOM,
            n_bptt=plan.higher_order_n_bptt,
        )
        rows: list[tuple[Any, ...]] = [
            (row.epoch, row.mean_loss, loss, row.val_f1, None)
            for row, loss in zip(trained.log, trained.val_losses, strict=True)
        ]
        rows.append(("test", None, None, None, f1))
        return rows

    def _extrapolation(self) -> list[tuple[Any, ...]]:
        plan = self._plan
        task = self._hull(plan.extrapolation_train_n)
        splits = self._splits(task, 0)
        by_size = {
            n: self._splits(self._hull(n), offset + 1).test
            for offset, n in enumerate(plan.extrapolation_sizes)
        }
        k_max = max(splits.k_max(), *(infer_k_max(records) for records in by_size.values()))
        rows: list[tuple[Any, ...]] = []
        for sharing in Sharing:
            trained, _ = self._fit(
                splits, task, t_total=plan.extrapolation_iterations, sharing=sharing, k_max=k_max
            )
            for n, records in by_size.items():
                row = evaluate(records, trained.params, TaskKind.HULL, plan.extrapolation_iterations)
                rows.append((sharing.value, plan.extrapolation_train_n, n, row.f1))
        return rows


_HEADERS: dict[ExperimentName, tuple[str, ...]] = {
    ExperimentName.COMPLEXITY_SCALING: ("n", "iterations", "test_f1", "param_count", "matches_base"),
    ExperimentName.RECURRENT_VS_STACKED: ("sharing", "steps", "test_f1", "param_count"),
    ExperimentName.BPTT_COMPARISON: ("schedule", "t_total", "epoch_seconds", "test_f1", "max_grad_norm"),
    ExperimentName.HIGHER_ORDER: ("epoch", "mean_loss", "val_loss", "val_f1", "test_f1"),
    ExperimentName.EXTRAPOLATION: ("sharing", "train_n", "test_n", "test_f1"),
}


def run_experiment(name: ExperimentName | str, plan: ExperimentPlan | None = None) -> ExperimentTable:
    return ExperimentRunner(plan or ExperimentPlan()).run(name)


def experiment_names() -> Sequence[str]:
    return [e.value for e in ExperimentName]
