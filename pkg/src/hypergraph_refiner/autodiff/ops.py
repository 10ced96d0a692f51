"""张量算子与对应的反向规则。

每个算子：
- 先校验形状，不匹配时抛出 DimensionError（带算子名）
- 仅当有输入在磁带上时才记录节点
- 除 broadcast_row / repeat_rows / tile_rows 外不做隐式广播
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
from scipy.special import expit

from hypergraph_refiner.autodiff.exceptions import DimensionError
from hypergraph_refiner.autodiff.tensor import Array, BackwardFn, Tensor
from hypergraph_refiner.common.constants import BCE_CLAMP, LAYER_NORM_EPS


def _emit(kind: str, inputs: Sequence[Tensor], value: Array, backward: BackwardFn) -> Tensor:
    for tensor in inputs:
        if tensor.node is not None and tensor.tape is not None:
            return tensor.tape.record(kind, inputs, value, backward)
    return Tensor(value)


def _same_shape(op: str, *xs: Tensor) -> None:
    first = xs[0].shape
    if any(x.shape != first for x in xs[1:]):
        raise DimensionError(op, tuple(x.shape for x in xs))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.cols != b.rows:
        raise DimensionError("matmul", (a.shape, b.shape))
    av, bv = a.value, b.value
    return _emit("matmul", (a, b), av @ bv, lambda g: (g @ bv.T, av.T @ g))


def add(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("add", a, b)
    return _emit("add", (a, b), a.value + b.value, lambda g: (g, g))


def sub(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("sub", a, b)
    return _emit("sub", (a, b), a.value - b.value, lambda g: (g, -g))


def hadamard(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("hadamard", a, b)
    av, bv = a.value, b.value
    return _emit("hadamard", (a, b), av * bv, lambda g: (g * bv, g * av))


def scale(a: Tensor, factor: float) -> Tensor:
    c = float(factor)
    return _emit("scale", (a,), a.value * c, lambda g: (g * c,))


def relu(a: Tensor) -> Tensor:
    mask = a.value > 0.0
    return _emit("relu", (a,), np.where(mask, a.value, 0.0), lambda g: (g * mask,))


def sigmoid(a: Tensor) -> Tensor:
    s = expit(a.value)
    return _emit("sigmoid", (a,), s, lambda g: (g * s * (1.0 - s),))


def reciprocal(a: Tensor) -> Tensor:
    inv = 1.0 / a.value
    return _emit("reciprocal", (a,), inv, lambda g: (-g * inv * inv,))


def transpose(a: Tensor) -> Tensor:
    return _emit("transpose", (a,), a.value.T.copy(), lambda g: (g.T,))


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, *, eps: float = LAYER_NORM_EPS) -> Tensor:
    """按行归一化：(x - mean) / sqrt(var + eps) * gain + bias。"""
    if gain.shape != (1, x.cols) or bias.shape != (1, x.cols):
        raise DimensionError("layer_norm", (x.shape, gain.shape, bias.shape))
    xv = x.value
    width = xv.shape[1]
    centered = xv - xv.mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt((centered * centered).mean(axis=1, keepdims=True) + eps)
    xhat = centered * inv_std
    gv = gain.value
    out = xhat * gv + bias.value

    def _backward(g: Array) -> tuple[Array, Array, Array]:
        dxhat = g * gv
        dx = (inv_std / width) * (
            width * dxhat
            - dxhat.sum(axis=1, keepdims=True)
            - xhat * (dxhat * xhat).sum(axis=1, keepdims=True)
        )
        return dx, (g * xhat).sum(axis=0, keepdims=True), g.sum(axis=0, keepdims=True)

    return _emit("layer_norm", (x, gain, bias), out, _backward)


def mean_rows(x: Tensor) -> Tensor:
    """逐列求均值，得到 1×c 行向量。"""
    m = x.rows
    if m == 0:
        raise DimensionError("mean_rows", (x.shape,), "empty input")
    return _emit(
        "mean_rows",
        (x,),
        x.value.mean(axis=0, keepdims=True),
        lambda g: (np.repeat(g / m, m, axis=0),),
    )


def broadcast_row(r: Tensor, rows: int) -> Tensor:
    if r.rows != 1:
        raise DimensionError("broadcast_row", (r.shape,), "expects a single row")
    return _emit(
        "broadcast_row",
        (r,),
        np.repeat(r.value, rows, axis=0),
        lambda g: (g.sum(axis=0, keepdims=True),),
    )


def concat_cols(*xs: Tensor) -> Tensor:
    if not xs or any(x.rows != xs[0].rows for x in xs):
        raise DimensionError("concat_cols", tuple(x.shape for x in xs))
    splits = np.cumsum([x.cols for x in xs])[:-1]
    return _emit(
        "concat_cols",
        xs,
        np.concatenate([x.value for x in xs], axis=1),
        lambda g: tuple(np.split(g, splits, axis=1)),
    )


def sum_all(x: Tensor) -> Tensor:
    shape = x.shape
    return _emit(
        "sum_all",
        (x,),
        np.array([[x.value.sum()]]),
        lambda g: (np.full(shape, g[0, 0]),),
    )


def bce(p: Tensor, y: Tensor) -> Tensor:
    """逐元素二元交叉熵，p 先截断到 [BCE_CLAMP, 1 - BCE_CLAMP]。"""
    _same_shape("bce", p, y)
    pv, yv = p.value, y.value
    pc = np.clip(pv, BCE_CLAMP, 1.0 - BCE_CLAMP)
    inside = (pv >= BCE_CLAMP) & (pv <= 1.0 - BCE_CLAMP)
    log_p, log_q = np.log(pc), np.log1p(-pc)
    out = -yv * log_p - (1.0 - yv) * log_q

    def _backward(g: Array) -> tuple[Array, Array]:
        dp = g * inside * (pc - yv) / (pc * (1.0 - pc))
        return dp, g * (log_q - log_p)

    return _emit("bce", (p, y), out, _backward)


def repeat_rows(x: Tensor, times: int) -> Tensor:
    """每行连续重复 times 次：第 i 行出现在 i*times .. i*times+times-1。"""
    m, c = x.shape
    return _emit(
        "repeat_rows",
        (x,),
        np.repeat(x.value, times, axis=0),
        lambda g: (g.reshape(m, times, c).sum(axis=1),),
    )


def tile_rows(x: Tensor, times: int) -> Tensor:
    """整体按块平铺 times 次：第 j 行出现在 j, j+m, j+2m, ...。"""
    m, c = x.shape
    return _emit(
        "tile_rows",
        (x,),
        np.tile(x.value, (times, 1)),
        lambda g: (g.reshape(times, m, c).sum(axis=0),),
    )


def reshape(x: Tensor, rows: int, cols: int) -> Tensor:
    if rows * cols != x.rows * x.cols:
        raise DimensionError("reshape", (x.shape, (rows, cols)))
    shape = x.shape
    return _emit(
        "reshape",
        (x,),
        x.value.reshape(rows, cols).copy(),
        lambda g: (g.reshape(shape),),
    )


_PRIMITIVES: dict[str, Callable[..., Tensor]] = {
    "matmul": matmul,
    "add": add,
    "sub": sub,
    "hadamard": hadamard,
    "scale": scale,
    "relu": relu,
    "sigmoid": sigmoid,
    "reciprocal": reciprocal,
    "transpose": transpose,
    "layer_norm": layer_norm,
    "mean_rows": mean_rows,
    "broadcast_row": broadcast_row,
    "concat_cols": concat_cols,
    "sum_all": sum_all,
    "bce": bce,
    "repeat_rows": repeat_rows,
    "tile_rows": tile_rows,
    "reshape": reshape,
}

PRIMITIVE_KINDS: tuple[str, ...] = tuple(_PRIMITIVES)


def primitive_forward(kind: str, inputs: Sequence[Tensor], **attrs: Any) -> Tensor:
    """按算子名分派：`primitive_forward("scale", [x], factor=2.0)`。"""
    try:
        fn = _PRIMITIVES[kind]
    except KeyError:
        raise ValueError(f"unknown op kind: {kind}") from None
    return fn(*inputs, **attrs)
