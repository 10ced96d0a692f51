"""集合预测损失。

超图模式：边槽与正例目标边做匈牙利匹配（在 detach 后的数值上求解，匹配本身不参与求导），
损失 = λ_inc·匹配列 BCE + λ_exist·存在性 BCE + λ_f1·(1 − soft F1)。
图模式：顶点编号即规范顺序，直接在非对角元素上计算 BCE 与 soft F1。
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from hypergraph_refiner.autodiff import Tensor, constant, ops
from hypergraph_refiner.autodiff.tensor import Array
from hypergraph_refiner.common.constants import BCE_CLAMP
from hypergraph_refiner.domain.exceptions import CapacityError, InvalidInputError
from hypergraph_refiner.domain.services.decoding import check_symmetric
from hypergraph_refiner.domain.services.matching import MatchResult, hungarian
from hypergraph_refiner.model.refiner import RefinerState


@dataclass(frozen=True, slots=True)
class LossWeights:
    inc: float = 1.0
    exist: float = 1.0
    f1: float = 1.0


@dataclass(frozen=True, slots=True, eq=False)
class TargetIncidence:
    matrix: Array  # n×k，前 k_pos 列为目标边
    mask: Array  # k，前 k_pos 个为 1
    k_pos: int


def target_incidence(edges: Iterable[Iterable[int]], n: int, k: int) -> TargetIncidence:
    edge_list = [tuple(edge) for edge in edges]
    if k < len(edge_list):
        raise CapacityError(slots=k, required=len(edge_list))
    matrix = np.zeros((n, k))
    for m, edge in enumerate(edge_list):
        if any(v < 0 or v >= n for v in edge):
            raise InvalidInputError(f"edge {edge} has vertex indices outside [0, {n})")
        matrix[list(edge), m] = 1.0
    mask = np.zeros(k)
    mask[: len(edge_list)] = 1.0
    return TargetIncidence(matrix, mask, len(edge_list))


def matching_cost(
    incidence: npt.ArrayLike,
    sigma: npt.ArrayLike,
    target: npt.ArrayLike,
    mask: npt.ArrayLike,
) -> Array:
    """cost(j, m) = Σ_i bce(I_ij, T_im) + bce(σ_j, 1)，只对 mask 为 1 的目标列计算。"""
    inc = np.clip(np.asarray(incidence, dtype=np.float64), BCE_CLAMP, 1.0 - BCE_CLAMP)
    exist = np.clip(np.asarray(sigma, dtype=np.float64).ravel(), BCE_CLAMP, 1.0 - BCE_CLAMP)
    positives = np.asarray(target, dtype=np.float64)[:, np.asarray(mask).ravel() > 0]
    if inc.shape[0] != positives.shape[0] or exist.shape[0] != inc.shape[1]:
        raise InvalidInputError(
            f"incidence {inc.shape}, sigma {exist.shape} and target {positives.shape} do not conform"
        )
    column_bce = -(np.log(inc).T @ positives) - (np.log1p(-inc).T @ (1.0 - positives))
    return column_bce - np.log(exist)[:, None]


def soft_f1(predicted: Tensor, target: Tensor) -> Tensor:
    """2·TP / (ΣP + ΣY)；P、Y 全为零时定义为 1。"""
    total = float(predicted.value.sum() + target.value.sum())
    if total == 0.0:
        return constant(1.0)
    tp = ops.sum_all(ops.hadamard(predicted, target))
    denominator = ops.add(ops.sum_all(predicted), ops.sum_all(target))
    return ops.scale(ops.hadamard(tp, ops.reciprocal(denominator)), 2.0)


def _permutation(match: MatchResult, k: int) -> Array:
    """k×k 列置换：先按目标顺序放匹配边槽，再按下标放未匹配边槽。"""
    order = [j for j, _ in match.matched()] + match.unmatched()
    out = np.zeros((k, k))
    out[order, np.arange(k)] = 1.0
    return out


def match_slots(state: RefinerState, edges: Iterable[Iterable[int]]) -> MatchResult:
    """在当前数值上求边槽与目标边的最小代价匹配。"""
    if state.sigma is None:
        raise InvalidInputError("slot matching needs an existence head (hypergraph mode)")
    target = target_incidence(edges, state.n, state.k)
    return hungarian(matching_cost(state.I.value, state.sigma.value, target.matrix, target.mask))


def set_prediction_loss(
    state: RefinerState,
    edges: Iterable[Iterable[int]],
    weights: LossWeights = LossWeights(),
    *,
    match: MatchResult | None = None,
) -> Tensor:
    """`match` 为空时现场求解；给定时按其固定匹配计算（如梯度校验）。"""
    if state.sigma is None:
        raise InvalidInputError("set prediction loss needs an existence head (hypergraph mode)")
    n, k = state.n, state.k
    edges = [tuple(edge) for edge in edges]
    target = target_incidence(edges, n, k)
    if match is None:
        match = match_slots(state, edges)
    else:
        paired = sorted(m for m in match.assignment if m is not None)
        if len(match.assignment) != k or paired != list(range(target.k_pos)):
            raise InvalidInputError(f"matching {match.assignment} does not pair {k} slots with {target.k_pos} edges")
    matched = np.array([0.0 if m is None else 1.0 for m in match.assignment])[None, :]
    exist_term = ops.scale(ops.sum_all(ops.bce(state.sigma, constant(matched))), 1.0 / k)
    loss = ops.scale(exist_term, weights.exist)
    if target.k_pos == 0:
        return loss

    order = _permutation(match, k)
    permutation, selection = constant(order), constant(order[:, : target.k_pos])
    positives = constant(target.matrix[:, : target.k_pos])
    inc_term = ops.sum_all(ops.bce(ops.matmul(state.I, selection), positives))
    loss = ops.add(loss, ops.scale(inc_term, weights.inc / (n * target.k_pos)))

    # σ 缩放后按目标顺序排列；未匹配列对应全零目标
    scaled = ops.hadamard(state.I, ops.broadcast_row(state.sigma, n))
    f1 = soft_f1(ops.matmul(scaled, permutation), constant(target.matrix))
    return ops.add(loss, ops.scale(ops.sub(constant(1.0), f1), weights.f1))


def target_adjacency(edges: Iterable[Iterable[int]], n: int) -> Array:
    adjacency = np.zeros((n, n))
    for edge in edges:
        i, j = edge
        if i == j:
            raise InvalidInputError(f"adjacency target has a self loop at {i}")
        adjacency[i, j] = adjacency[j, i] = 1.0
    return adjacency


def adjacency_loss(incidence: Tensor, target: npt.ArrayLike, f1_weight: float = 1.0) -> Tensor:
    """非对角元素上的平均 BCE + λ_f1·(1 − soft F1)。"""
    check_symmetric(incidence.value)
    adjacency = np.asarray(target, dtype=np.float64)
    n = incidence.rows
    if adjacency.shape != (n, n):
        raise InvalidInputError(f"target adjacency {adjacency.shape} does not match {(n, n)}")
    if np.any(np.diag(adjacency) != 0):
        raise InvalidInputError("target adjacency must have a zero diagonal")
    if n < 2:
        raise InvalidInputError("adjacency loss needs at least two vertices")
    off_diagonal = constant(1.0 - np.eye(n))
    pair_bce = ops.sum_all(ops.hadamard(ops.bce(incidence, constant(adjacency)), off_diagonal))
    mean_bce = ops.scale(pair_bce, 1.0 / (n * (n - 1)))
    f1 = soft_f1(ops.hadamard(incidence, off_diagonal), constant(adjacency))
    return ops.add(mean_bce, ops.scale(ops.sub(constant(1.0), f1), f1_weight))


def example_loss(state: RefinerState, edges: Iterable[Iterable[int]], weights: LossWeights) -> Tensor:
    """按 refiner 模式选择损失：有存在性头走集合匹配，否则走邻接损失。"""
    if state.sigma is None:
        return adjacency_loss(state.I, target_adjacency(edges, state.n), weights.f1)
    return set_prediction_loss(state, edges, weights)
