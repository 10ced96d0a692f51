"""循环超图 refiner。

单步顺序：上一状态的关联矩阵 → 顶点更新 → 边更新（使用新顶点）→ 新的关联矩阵。
graph 模式下 E 恒等于 V，关联矩阵退化为对称的邻接概率矩阵。
"""

from __future__ import annotations

from collections.abc import Collection, Sequence
from dataclasses import dataclass

import numpy as np

from hypergraph_refiner.autodiff import Tensor, constant, detach, ops
from hypergraph_refiner.autodiff.tensor import Array
from hypergraph_refiner.model.exceptions import RefinerConfigError
from hypergraph_refiner.model.layers import affine, deepsets_block, weighted_mean
from hypergraph_refiner.model.params import BoundParams, RefinerMode


@dataclass(frozen=True, slots=True)
class RefinerState:
    V: Tensor  # noqa: N815
    E: Tensor  # noqa: N815
    I: Tensor  # noqa: N815, E741
    sigma: Tensor | None  # 1×k；graph 模式下没有存在性头
    t: int

    @property
    def n(self) -> int:
        return self.V.rows

    @property
    def k(self) -> int:
        return self.E.rows

    def scalar_count(self) -> int:
        """状态占用的标量数：n·d + k·d + n·k + k。"""
        total = self.V.value.size + self.E.value.size + self.I.value.size
        return total + (self.sigma.value.size if self.sigma is not None else 0)

    def detached(self) -> RefinerState:
        sigma = detach(self.sigma) if self.sigma is not None else None
        return RefinerState(detach(self.V), detach(self.E), detach(self.I), sigma, self.t)

    def sigma_array(self) -> Array | None:
        return self.sigma.value.ravel() if self.sigma is not None else None


def _is_graph(params: BoundParams) -> bool:
    return params.config.mode is RefinerMode.GRAPH


def incidence(
    V: Tensor, E: Tensor, params: BoundParams, *, step: int = 0  # noqa: N803
) -> tuple[Tensor, Tensor | None]:
    """所有 (顶点, 边槽) 组合上的 φ_INC，以及每个边槽的存在概率 σ。"""
    cell = params.cell(step)
    n, k = V.rows, E.rows
    if V.cols != E.cols:
        raise RefinerConfigError(f"vertex width {V.cols} != edge width {E.cols}")
    if _is_graph(params):
        pairs = ops.add(ops.repeat_rows(V, n), ops.tile_rows(V, n))
        pre = ops.matmul(pairs, params[f"{cell}.phi_inc.w_pair"])
        rows = n * n
    else:
        pre = ops.add(
            ops.repeat_rows(ops.matmul(V, params[f"{cell}.phi_inc.w_vertex"]), k),
            ops.tile_rows(ops.matmul(E, params[f"{cell}.phi_inc.w_edge"]), n),
        )
        rows = n * k
    hidden = ops.relu(ops.add(pre, ops.broadcast_row(params[f"{cell}.phi_inc.b1"], rows)))
    logits = affine(hidden, params[f"{cell}.phi_inc.w_out"], params[f"{cell}.phi_inc.b_out"])
    inc = ops.reshape(ops.sigmoid(logits), n, n if _is_graph(params) else k)
    if _is_graph(params):
        return inc, None
    exist = affine(E, params[f"{cell}.exist.w"], params[f"{cell}.exist.b"])
    return inc, ops.transpose(ops.sigmoid(exist))


def init_state(points: Array, k: int, params: BoundParams) -> RefinerState:
    config = params.config
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise RefinerConfigError(f"points must be a non-empty n×f array, got shape {pts.shape}")
    if pts.shape[1] != config.in_features:
        raise RefinerConfigError(
            f"points have {pts.shape[1]} features, refiner expects {config.in_features}"
        )
    V = affine(constant(pts), params["input_embed.w"], params["input_embed.b"])  # noqa: N806
    if _is_graph(params):
        E = V  # noqa: N806
    else:
        if k > config.k_max:
            raise RefinerConfigError(f"k={k} exceeds k_max={config.k_max}")
        if k < 1:
            raise RefinerConfigError("k must be at least 1")
        E = ops.matmul(constant(np.eye(k, config.k_max)), params["edge_init"])  # noqa: N806
    inc, sigma = incidence(V, E, params, step=0)
    return RefinerState(V, E, inc, sigma, 0)


def refine_step(state: RefinerState, params: BoundParams) -> RefinerState:
    step = state.t
    cell = params.cell(step)
    if _is_graph(params):
        message = weighted_mean(state.I, state.V)
        V = deepsets_block(ops.concat_cols(state.V, message), params, f"{cell}.phi_vrt")  # noqa: N806
        inc, _ = incidence(V, V, params, step=step)
        return RefinerState(V, V, inc, None, step + 1)

    vertex_message = weighted_mean(state.I, state.E)
    V = deepsets_block(ops.concat_cols(state.V, vertex_message), params, f"{cell}.phi_vrt")  # noqa: N806
    edge_message = weighted_mean(ops.transpose(state.I), V)
    E = deepsets_block(ops.concat_cols(state.E, edge_message), params, f"{cell}.phi_edg")  # noqa: N806
    inc, sigma = incidence(V, E, params, step=step)
    return RefinerState(V, E, inc, sigma, step + 1)


def unroll(
    state: RefinerState,
    params: BoundParams,
    steps: int,
    *,
    detach_boundaries: Collection[int] = (),
) -> list[RefinerState]:
    """从 state 起连续执行 steps 步；迭代编号在 detach_boundaries 中的状态先 detach 再前进。"""
    out: list[RefinerState] = []
    current = state
    for _ in range(steps):
        if current.t in detach_boundaries:
            current = current.detached()
        current = refine_step(current, params)
        out.append(current)
    return out


def run(
    points: Array,
    k: int,
    t_total: int,
    params: BoundParams,
    detach_boundaries: Collection[int] = (),
) -> Sequence[RefinerState]:
    """返回全部 T_total + 1 个状态（含初始状态）。"""
    if t_total < 1:
        raise RefinerConfigError("T_total must be at least 1")
    for boundary in detach_boundaries:
        if not 0 <= boundary < t_total:
            raise RefinerConfigError(f"detach boundary {boundary} outside [0, {t_total})")
    if params.config.copies > 1 and t_total > params.config.copies:
        raise RefinerConfigError(
            f"stacked refiner has {params.config.copies} step copies, T_total={t_total}"
        )
    initial = init_state(points, k, params)
    return [initial, *unroll(initial, params, t_total, detach_boundaries=frozenset(detach_boundaries))]
