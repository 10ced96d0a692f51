"""基础层：仿射、DeepSets 等变仿射、DeepSets 块。"""

from __future__ import annotations

import numpy as np

from hypergraph_refiner.autodiff import Tensor, constant, ops
from hypergraph_refiner.common.constants import AGGREGATION_EPS
from hypergraph_refiner.model.params import BoundParams


def affine(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    return ops.add(ops.matmul(x, w), ops.broadcast_row(b, x.rows))


def equivariant_affine(x: Tensor, w_self: Tensor, w_mean: Tensor, b: Tensor) -> Tensor:
    """第 i 行输出 = x_i·W_self + mean_j(x_j)·W_mean + b。"""
    pooled = ops.add(ops.matmul(ops.mean_rows(x), w_mean), b)
    return ops.add(ops.matmul(x, w_self), ops.broadcast_row(pooled, x.rows))


def deepsets_block(x: Tensor, params: BoundParams, prefix: str) -> Tensor:
    """等变仿射 → ReLU → LayerNorm → 等变仿射。"""
    h = equivariant_affine(
        x, params[f"{prefix}.l1.w_self"], params[f"{prefix}.l1.w_mean"], params[f"{prefix}.l1.b"]
    )
    h = ops.relu(h)
    h = ops.layer_norm(h, params[f"{prefix}.ln.gain"], params[f"{prefix}.ln.bias"])
    return equivariant_affine(
        h, params[f"{prefix}.l2.w_self"], params[f"{prefix}.l2.w_mean"], params[f"{prefix}.l2.b"]
    )


def weighted_mean(weights: Tensor, values: Tensor) -> Tensor:
    """第 i 行 = Σ_j w_ij·v_j / (Σ_j w_ij + ε)。"""
    m, p = weights.shape
    width = values.cols
    totals = ops.matmul(weights, constant(np.ones((p, 1))))
    inv = ops.reciprocal(ops.add(totals, constant(np.full((m, 1), AGGREGATION_EPS))))
    return ops.hadamard(
        ops.matmul(weights, values), ops.matmul(inv, constant(np.ones((1, width))))
    )
