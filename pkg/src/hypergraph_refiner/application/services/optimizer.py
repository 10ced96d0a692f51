"""Adam 优化器（逐参数步数计数，缺失梯度的参数本次不更新）。"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from hypergraph_refiner.autodiff import DimensionError
from hypergraph_refiner.autodiff.tensor import Array
from hypergraph_refiner.common.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPS
from hypergraph_refiner.model.params import RefinerParams


@dataclass(slots=True)
class AdamState:
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPS
    m: dict[str, Array] = field(default_factory=dict)
    v: dict[str, Array] = field(default_factory=dict)
    steps: dict[str, int] = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: RefinerParams) -> AdamState:
        state = cls()
        for name, value in params.values.items():
            state.m[name] = np.zeros_like(value)
            state.v[name] = np.zeros_like(value)
            state.steps[name] = 0
        return state


def adam_step(
    params: RefinerParams,
    grads: Mapping[str, Array],
    adam: AdamState,
    lr: float,
) -> RefinerParams:
    """带偏差修正的 Adam；原地更新 adam 的矩估计，返回新的参数表。"""
    values = dict(params.values)
    for name, grad in grads.items():
        if name not in values:
            raise KeyError(f"gradient for unknown parameter {name!r}")
        param = values[name]
        if grad.shape != param.shape:
            raise DimensionError("adam_step", (param.shape, grad.shape), name)
        step = adam.steps.get(name, 0) + 1
        m = adam.beta1 * adam.m.get(name, np.zeros_like(param)) + (1.0 - adam.beta1) * grad
        v = adam.beta2 * adam.v.get(name, np.zeros_like(param)) + (1.0 - adam.beta2) * grad * grad
        m_hat = m / (1.0 - adam.beta1**step)
        v_hat = v / (1.0 - adam.beta2**step)
        values[name] = param - lr * m_hat / (np.sqrt(v_hat) + adam.eps)
        adam.m[name], adam.v[name], adam.steps[name] = m, v, step
    return params.replace(values)


def gradient_norm(grads: Mapping[str, Array]) -> float:
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))
