"""训练：按调度窗口做 BPTT，逐窗口 Adam 更新，按验证 F1 早停。

状态管理：
- 磁带只保存当前窗口的计算，窗口结束后回退到序列起点的检查点
- `history` 只保留下一个窗口可能用到的 detach 状态，长度与 T_total 无关
- 窗口之外的迭代用常量参数前向，不产生任何磁带节点
"""

from __future__ import annotations

import time
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from hypergraph_refiner.application.dto import EpochLogRow
from hypergraph_refiner.application.exceptions import ConfigError, UsageError
from hypergraph_refiner.application.services.evaluation_service import (
    average,
    score_example,
    score_records,
    slot_count,
)
from hypergraph_refiner.application.services.optimizer import AdamState, adam_step, gradient_norm
from hypergraph_refiner.application.services.schedules import TrainConfig, Window, schedule_windows
from hypergraph_refiner.autodiff import Tape, Tensor, ops
from hypergraph_refiner.config.logging import get_logger
from hypergraph_refiner.domain.value_objects import Edges, ExampleRecord
from hypergraph_refiner.model.loss import LossWeights, example_loss
from hypergraph_refiner.model.params import RefinerConfig, RefinerParams, Sharing, describe, init_params
from hypergraph_refiner.model.refiner import RefinerState, init_state, unroll

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class SequenceResult:
    params: RefinerParams
    losses: tuple[float, ...]
    grad_norms: tuple[float, ...]
    touched: tuple[frozenset[str], ...]  # 每个窗口实际收到梯度的参数名
    peak_nodes: int

    @property
    def backward_passes(self) -> int:
        return len(self.losses)


@dataclass(slots=True)
class TrainResult:
    params: RefinerParams
    best_epoch: int
    best_val_f1: float
    log: list[EpochLogRow] = field(default_factory=list)
    val_losses: list[float | None] = field(default_factory=list)


def infer_k_max(records: Sequence[ExampleRecord]) -> int:
    """k_max = auto：训练数据中最大的目标边数。"""
    return max(1, max((len(record.edges) for record in records), default=0))


def _window_loss(
    states: Sequence[RefinerState], window: Window, edges: Edges, weights: LossWeights
) -> Tensor:
    terms = [example_loss(states[t - window.start], edges, weights) for t in window.supervised]
    total = terms[0]
    for term in terms[1:]:
        total = ops.add(total, term)
    return ops.scale(total, 1.0 / len(terms)) if len(terms) > 1 else total


def _state_at(
    history: dict[int, RefinerState],
    target: int,
    record: ExampleRecord,
    k: int,
    params: RefinerParams,
) -> RefinerState:
    """history 中 ≤ target 的最近状态出发，无磁带前向到 target。"""
    constants = params.constants()
    if not history:
        history[0] = init_state(record.points.coords, k, constants)
    base = max(t for t in history if t <= target)
    if base < target:
        for state in unroll(history[base], constants, target - base):
            history[state.t] = state
    return history[target]


def _prune(history: dict[int, RefinerState], keep_from: int) -> None:
    floor = min(keep_from, max(history))
    for t in [t for t in history if t < floor]:
        del history[t]


def train_sequence(
    params: RefinerParams,
    adam: AdamState,
    record: ExampleRecord,
    config: TrainConfig,
    rng: np.random.Generator,
) -> SequenceResult:
    model = params.config
    if model.sharing is Sharing.STACKED and config.t_total > model.copies:
        raise ConfigError(f"stacked refiner has {model.copies} step copies, T_total={config.t_total}")
    windows = schedule_windows(config, rng, final_only=model.sharing is Sharing.STACKED)
    k = slot_count(params, record)
    weights = config.weights

    tape = Tape()
    origin = tape.checkpoint()
    history: dict[int, RefinerState] = {}
    losses: list[float] = []
    norms: list[float] = []
    touched: list[frozenset[str]] = []
    for index, window in enumerate(windows):
        bound = params.bind(tape)
        if window.start == 0:
            start = init_state(record.points.coords, k, bound)
        else:
            start = _state_at(history, window.start, record, k, params)
        states = [start, *unroll(start, bound, window.end - window.start)]
        for state in states:
            history[state.t] = state.detached()

        loss = _window_loss(states, window, record.edges, weights)
        grads = bound.gradients(tape.backward(loss))
        params = adam_step(params, grads, adam, config.lr)
        losses.append(loss.item())
        norms.append(gradient_norm(grads))
        touched.append(frozenset(grads))

        tape.reset(origin)
        if index + 1 < len(windows):
            _prune(history, windows[index + 1].start)
    return SequenceResult(params, tuple(losses), tuple(norms), tuple(touched), tape.peak_nodes)


def validate(
    params: RefinerParams,
    records: Sequence[ExampleRecord],
    config: TrainConfig,
    *,
    threads: int = 1,
) -> tuple[float, float | None]:
    """验证集上的 (宏平均 F1, 平均损失)。"""
    scores = score_records(
        records, lambda r: score_example(params, r, config.t_total, config.weights), threads=threads
    )
    mean = average(scores)
    return mean.f1, mean.loss


def train_run(
    train: Sequence[ExampleRecord],
    val: Sequence[ExampleRecord],
    model: RefinerConfig,
    config: TrainConfig,
    *,
    threads: int = 1,
) -> TrainResult:
    if not train or not val:
        raise UsageError("training needs non-empty train and validation splits")
    rng = np.random.default_rng(config.seed)
    params = init_params(model, seed=config.seed)
    logger.info("training_started", schedule=config.schedule.value, t_total=config.t_total, **describe(model))
    adam = AdamState.for_params(params)
    result = TrainResult(params=params.copy(), best_epoch=-1, best_val_f1=float("-inf"))
    since_best = 0
    for epoch in range(config.epochs):
        started = time.perf_counter()
        losses: list[float] = []
        max_norm = 0.0
        for idx in rng.permutation(len(train)):
            step = train_sequence(params, adam, train[int(idx)], config, rng)
            params = step.params
            losses.extend(step.losses)
            max_norm = max(max_norm, *step.grad_norms)
        # 只计训练窗口，不含验证
        elapsed = time.perf_counter() - started
        val_f1, val_loss = validate(params, val, config, threads=threads)
        row = EpochLogRow(
            epoch=epoch,
            wall_seconds=elapsed,
            mean_loss=float(np.mean(losses)),
            val_f1=val_f1,
            max_grad_norm=max_norm,
        )
        result.log.append(row)
        result.val_losses.append(val_loss)
        logger.info(
            "epoch_finished",
            epoch=epoch,
            mean_loss=row.mean_loss,
            val_f1=val_f1,
            val_loss=val_loss,
            max_grad_norm=max_norm,
            wall_seconds=round(row.wall_seconds, 3),
        )
        if val_f1 > result.best_val_f1:
            result.params, result.best_epoch, result.best_val_f1 = params.copy(), epoch, val_f1
            since_best = 0
        else:
            since_best += 1
        if since_best >= config.patience:
            logger.info("early_stopped", epoch=epoch, best_epoch=result.best_epoch)
            break
    return result
