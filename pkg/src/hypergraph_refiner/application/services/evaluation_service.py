"""评测：运行 refiner、按任务解码、逐样本计算指标并做宏平均。"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from hypergraph_refiner.application.dto import MetricsRow
from hypergraph_refiner.application.exceptions import TaskMismatchError, UsageError
from hypergraph_refiner.autodiff.tensor import Array
from hypergraph_refiner.domain.exceptions import CapacityError
from hypergraph_refiner.domain.services.decoding import (
    decode_adjacency,
    decode_hull,
    decode_partition,
)
from hypergraph_refiner.domain.services.partition import labels_from_edges
from hypergraph_refiner.domain.services.scoring import (
    ari,
    edge_set_scores,
    partition_pair_edges,
    rand_index,
)
from hypergraph_refiner.domain.value_objects import EdgePrediction, ExampleRecord, TaskKind
from hypergraph_refiner.model.loss import LossWeights, example_loss, target_adjacency, target_incidence
from hypergraph_refiner.model.params import RefinerMode, RefinerParams
from hypergraph_refiner.model.refiner import RefinerState, run


@dataclass(frozen=True, slots=True, eq=False)
class Prediction:
    incidence: Array
    sigma: Array | None


@dataclass(frozen=True, slots=True)
class ExampleScore:
    precision: float
    recall: float
    f1: float
    accuracy: float | None = None
    ari: float | None = None
    ri: float | None = None
    loss: float | None = None


def task_mode(task: TaskKind) -> RefinerMode:
    """Delaunay 邻接直接用图模式；其余任务预测超边。"""
    return RefinerMode.GRAPH if task is TaskKind.DELAUNAY else RefinerMode.HYPERGRAPH


def check_task(expected: TaskKind, actual: TaskKind) -> None:
    if expected is not actual:
        raise TaskMismatchError(expected=expected.value, actual=actual.value)


def slot_count(params: RefinerParams, record: ExampleRecord) -> int:
    if params.config.mode is RefinerMode.GRAPH:
        return record.n
    return params.config.k_max


def final_state(params: RefinerParams, record: ExampleRecord, t_total: int) -> RefinerState:
    states = run(record.points.coords, slot_count(params, record), t_total, params.constants())
    return states[-1]


def oracle_prediction(record: ExampleRecord) -> Prediction:
    """把目标当作预测：用于检查解码与指标流水线。"""
    if record.task is TaskKind.DELAUNAY:
        return Prediction(target_adjacency(record.edges, record.n), None)
    target = target_incidence(record.edges, record.n, max(len(record.edges), 1))
    return Prediction(target.matrix, target.mask)


def score_prediction(record: ExampleRecord, prediction: Prediction) -> ExampleScore:
    truth = EdgePrediction(record.edges)
    if record.task is TaskKind.HULL:
        if prediction.sigma is None:
            raise UsageError("hull predictions need existence probabilities")
        pred = decode_hull(prediction.incidence, prediction.sigma, record.points.dim)
        s = edge_set_scores(pred, truth)
        return ExampleScore(s.precision, s.recall, s.f1)
    if record.task is TaskKind.DELAUNAY:
        s = edge_set_scores(decode_adjacency(prediction.incidence), truth, n=record.n)
        return ExampleScore(s.precision, s.recall, s.f1, accuracy=s.accuracy)
    labels = decode_partition(prediction.incidence)
    truth_labels = labels_from_edges(record.edges, record.n)
    s = edge_set_scores(partition_pair_edges(labels), partition_pair_edges(truth_labels))
    if record.n < 2:
        return ExampleScore(s.precision, s.recall, s.f1)
    return ExampleScore(
        s.precision, s.recall, s.f1, ari=ari(labels, truth_labels), ri=rand_index(labels, truth_labels)
    )


def score_example(
    params: RefinerParams,
    record: ExampleRecord,
    t_total: int,
    weights: LossWeights = LossWeights(),
) -> ExampleScore:
    state = final_state(params, record, t_total)
    prediction = Prediction(state.I.value, state.sigma_array())
    score = score_prediction(record, prediction)
    try:
        loss = example_loss(state, record.edges, weights).item()
    except CapacityError:
        # 外推到更大的 n 时目标边数可能超过 k_max
        return score
    return replace(score, loss=loss)


def _macro(values: Sequence[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def average(scores: Sequence[ExampleScore]) -> ExampleScore:
    """逐样本宏平均；某项在所有样本上都未定义时保持为 None。"""
    if not scores:
        raise UsageError("cannot average metrics over an empty split")
    merged = {f.name: _macro([getattr(s, f.name) for s in scores]) for f in fields(ExampleScore)}
    return ExampleScore(**merged)  # type: ignore[arg-type]


def score_records(
    records: Sequence[ExampleRecord],
    scorer: Callable[[ExampleRecord], ExampleScore],
    *,
    threads: int = 1,
) -> list[ExampleScore]:
    """按输入顺序返回；threads > 1 时在线程池中并行（参数快照不可变）。"""
    if threads <= 1:
        return [scorer(record) for record in records]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(scorer, records))


def evaluate(
    records: Sequence[ExampleRecord],
    params: RefinerParams | None,
    task: TaskKind,
    t_total: int,
    *,
    split: str = "test",
    threads: int = 1,
) -> MetricsRow:
    """params 为 None 时使用 oracle 预测。"""
    if not records:
        raise UsageError(f"split '{split}' is empty")
    for record in records:
        check_task(task, record.task)
    if params is not None and params.config.mode is not task_mode(task):
        raise TaskMismatchError(expected=params.config.mode.value, actual=task.value)
    if params is None:
        scores = score_records(records, lambda r: score_prediction(r, oracle_prediction(r)), threads=threads)
    else:
        scores = score_records(records, lambda r: score_example(params, r, t_total), threads=threads)
    mean = average(scores)
    sizes = [record.n for record in records]
    return MetricsRow(
        task=task.value,
        split=split,
        n_min=min(sizes),
        n_max=max(sizes),
        precision=mean.precision,
        recall=mean.recall,
        f1=mean.f1,
        accuracy=mean.accuracy,
        ari=mean.ari,
        ri=mean.ri,
    )
