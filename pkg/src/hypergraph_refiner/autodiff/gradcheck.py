"""有限差分梯度校验。"""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import numpy as np

from hypergraph_refiner.autodiff.tensor import Array, Tape, Tensor, as_array, constant


def analytic_gradient(f: Callable[[Tensor], Tensor], x: Any) -> Array:
    tape = Tape()
    leaf = tape.leaf(x)
    out = f(leaf)
    if out.node is None:
        return np.zeros_like(leaf.value)
    grads = tape.backward(out)
    return grads.get(leaf.node, np.zeros_like(leaf.value))  # type: ignore[arg-type]


def numeric_gradient(f: Callable[[Tensor], Tensor], x: Any, h: float) -> Array:
    base = as_array(x)
    grad = np.zeros_like(base)
    for idx in np.ndindex(*base.shape):
        plus = base.copy()
        minus = base.copy()
        plus[idx] += h
        minus[idx] -= h
        grad[idx] = (f(constant(plus)).item() - f(constant(minus)).item()) / (2.0 * h)
    return grad


def finite_difference_check(
    f: Callable[[Tensor], Tensor],
    x: Any,
    h: float = 1e-5,
    *,
    eps: float = 1e-8,
) -> float:
    """返回 max |analytic - numeric| / (|analytic| + |numeric| + eps)。"""
    if h <= 0:
        raise ValueError("h must be positive")
    analytic = analytic_gradient(f, x)
    numeric = numeric_gradient(f, x, h)
    err = np.abs(analytic - numeric) / (np.abs(analytic) + np.abs(numeric) + eps)
    return float(err.max()) if err.size else 0.0
