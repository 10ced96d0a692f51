"""数据集生成：逐条采样、求精确目标、按定义复核，退化时重采样。

每条记录使用由 seed 派生的独立随机流（SeedSequence.spawn），
因此并行生成与串行生成得到完全相同的结果，写出顺序固定为下标顺序。
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Protocol

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from hypergraph_refiner.application.exceptions import DegeneracyExhaustedError
from hypergraph_refiner.common.constants import MAX_RESAMPLE_ATTEMPTS
from hypergraph_refiner.config.logging import get_logger
from hypergraph_refiner.domain.exceptions import DegenerateInputError
from hypergraph_refiner.domain.services.convex_hull import (
    convex_hull_3d_incremental,
    convex_hull_bruteforce,
    validate_hull,
)
from hypergraph_refiner.domain.services.delaunay import (
    delaunay_bowyer_watson,
    delaunay_bruteforce,
    triangle_edges,
    validate_delaunay,
)
from hypergraph_refiner.domain.services.partition import synth_partition_sample, validate_partition
from hypergraph_refiner.domain.services.sampling import PointDistribution, sample_points
from hypergraph_refiner.domain.value_objects import ExampleRecord, TaskKind

logger = get_logger(__name__)


class OracleChoice(str, Enum):
    AUTO = "auto"  # 3D 凸包 / Delaunay 用快速算法，其余暴力
    BRUTEFORCE = "bruteforce"


class TaskParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    task: TaskKind
    dist: PointDistribution = PointDistribution.SPHERE
    dim: int = Field(default=3, ge=1)
    n_min: int = Field(ge=1)
    n_max: int = Field(ge=1)
    c_min: int = Field(default=2, ge=1, description="划分任务的簇数下界")
    c_max: int = Field(default=6, ge=1)
    jitter: float = Field(default=0.3, ge=0)
    oracle: OracleChoice = OracleChoice.AUTO

    @model_validator(mode="after")
    def _check_task(self) -> TaskParams:
        if self.n_max < self.n_min:
            raise ValueError(f"n_max={self.n_max} is below n_min={self.n_min}")
        if self.c_max < self.c_min:
            raise ValueError(f"c_max={self.c_max} is below c_min={self.c_min}")
        if self.task is TaskKind.HULL:
            if self.dim < 2:
                raise ValueError("hull task needs dim >= 2")
            if self.n_min < self.dim + 1:
                raise ValueError(f"hull in {self.dim}D needs n >= {self.dim + 1}")
        if self.task is TaskKind.DELAUNAY:
            if self.dim != 2:
                raise ValueError("delaunay task is two-dimensional")
            if self.dist is PointDistribution.SPHERE:
                raise ValueError("points on a circle are cocircular; use unit_square or gaussian")
            if self.n_min < 3:
                raise ValueError("delaunay task needs n >= 3")
        if self.dist is PointDistribution.UNIT_SQUARE and self.dim != 2:
            raise ValueError("unit_square is two-dimensional")
        return self


class RecordSink(Protocol):
    def write(self, record: ExampleRecord) -> None: ...


@dataclass(frozen=True, slots=True)
class GeneratedRecord:
    record: ExampleRecord
    resamples: int


def make_record(params: TaskParams, rng: np.random.Generator) -> ExampleRecord:
    """生成一条记录并按定义复核目标；退化输入抛 DegenerateInputError。"""
    if params.task is TaskKind.PARTITION:
        record = synth_partition_sample(
            rng, (params.n_min, params.n_max), (params.c_min, params.c_max), params.dim, jitter=params.jitter
        )
        validate_partition(record.edges, record.n)
        return record

    n = int(rng.integers(params.n_min, params.n_max + 1))
    points = sample_points(params.dist, n, params.dim, rng)
    fast = params.oracle is OracleChoice.AUTO
    if params.task is TaskKind.HULL:
        if fast and params.dim == 3:
            facets = convex_hull_3d_incremental(points)
        else:
            facets = convex_hull_bruteforce(points)
        validate_hull(points, facets)
        return ExampleRecord(points, facets, TaskKind.HULL)

    triangles = delaunay_bowyer_watson(points) if fast else delaunay_bruteforce(points).triangles
    validate_delaunay(points, triangles)
    return ExampleRecord(points, triangle_edges(triangles), TaskKind.DELAUNAY)


def _generate_one(params: TaskParams, index: int, seed: np.random.SeedSequence) -> GeneratedRecord:
    rng = np.random.default_rng(seed)
    for attempt in range(MAX_RESAMPLE_ATTEMPTS + 1):
        try:
            return GeneratedRecord(make_record(params, rng), attempt)
        except DegenerateInputError:
            continue
    raise DegeneracyExhaustedError(index=index, attempts=MAX_RESAMPLE_ATTEMPTS)


def generate_records(
    params: TaskParams, count: int, seed: int, *, threads: int = 1
) -> list[GeneratedRecord]:
    children = np.random.SeedSequence(seed).spawn(count)
    if threads <= 1:
        return [_generate_one(params, i, child) for i, child in enumerate(children)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda item: _generate_one(params, *item), enumerate(children)))


def generate_dataset(
    params: TaskParams,
    count: int,
    seed: int,
    sink: RecordSink,
    *,
    threads: int = 1,
) -> int:
    generated = generate_records(params, count, seed, threads=threads)
    resampled = 0
    for index, item in enumerate(generated):
        if item.resamples:
            resampled += item.resamples
            logger.debug("dataset_resampled", index=index, resamples=item.resamples)
        sink.write(item.record)
    logger.info("dataset_written", task=params.task.value, count=count, seed=seed, resampled=resampled)
    return count
