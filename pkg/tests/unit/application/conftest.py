"""应用层测试共用的小数据集与小模型。"""

from __future__ import annotations

import pytest

from hypergraph_refiner.application.services.dataset_service import TaskParams, generate_records
from hypergraph_refiner.application.services.training_service import infer_k_max
from hypergraph_refiner.domain.services.sampling import PointDistribution
from hypergraph_refiner.domain.value_objects import ExampleRecord, TaskKind
from hypergraph_refiner.model import RefinerConfig, RefinerMode, RefinerParams, init_params


def make_records(params: TaskParams, count: int, seed: int) -> list[ExampleRecord]:
    return [g.record for g in generate_records(params, count, seed)]


@pytest.fixture
def hull_task() -> TaskParams:
    return TaskParams(task=TaskKind.HULL, dist=PointDistribution.SPHERE, dim=3, n_min=6, n_max=6)


@pytest.fixture
def hull_records(hull_task: TaskParams) -> list[ExampleRecord]:
    return make_records(hull_task, 4, seed=3)


@pytest.fixture
def delaunay_records() -> list[ExampleRecord]:
    task = TaskParams(task=TaskKind.DELAUNAY, dist=PointDistribution.UNIT_SQUARE, dim=2, n_min=5, n_max=7)
    return make_records(task, 3, seed=4)


@pytest.fixture
def partition_records() -> list[ExampleRecord]:
    task = TaskParams(task=TaskKind.PARTITION, dist=PointDistribution.GAUSSIAN, dim=2, n_min=6, n_max=9)
    return make_records(task, 3, seed=5)


@pytest.fixture
def hull_model(hull_records: list[ExampleRecord]) -> RefinerConfig:
    return RefinerConfig(in_features=3, d=4, k_max=infer_k_max(hull_records), mode=RefinerMode.HYPERGRAPH)


@pytest.fixture
def hull_params(hull_model: RefinerConfig) -> RefinerParams:
    return init_params(hull_model, seed=13)
