"""Refiner 参数表。

参数以 名称 → 二维数组 的有序映射保存，名称即检查点里的键：
- `input_embed.*`、`edge_init` 为所有步共享
- `cell{c}.*` 为单步模块（φ_VRT / φ_EDG / φ_INC / existence head）；
  recurrent 只有 cell0，stacked 有 steps 份
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from hypergraph_refiner.autodiff import Tape, Tensor, constant
from hypergraph_refiner.autodiff.tensor import Array
from hypergraph_refiner.model.exceptions import RefinerConfigError


class RefinerMode(str, Enum):
    HYPERGRAPH = "hypergraph"
    GRAPH = "graph"


class Sharing(str, Enum):
    RECURRENT = "recurrent"
    STACKED = "stacked"


class RefinerConfig(BaseModel):
    """决定参数形状的全部超参数。"""

    model_config = ConfigDict(frozen=True)

    in_features: int = Field(ge=1)
    d: int = Field(default=128, ge=1)
    k_max: int = Field(default=10, ge=1)
    mode: RefinerMode = RefinerMode.HYPERGRAPH
    sharing: Sharing = Sharing.RECURRENT
    steps: int = Field(default=1, ge=1, description="stacked 模式下的参数份数（= T_total）")

    @property
    def copies(self) -> int:
        return self.steps if self.sharing is Sharing.STACKED else 1

    def cell_index(self, step: int) -> int:
        if self.sharing is Sharing.RECURRENT:
            return 0
        if step >= self.steps:
            raise RefinerConfigError(
                f"stacked refiner has {self.steps} step copies, step {step} requested"
            )
        return step


def _deepsets_shapes(prefix: str, d_in: int, d: int) -> list[tuple[str, tuple[int, int]]]:
    return [
        (f"{prefix}.l1.w_self", (d_in, d)),
        (f"{prefix}.l1.w_mean", (d_in, d)),
        (f"{prefix}.l1.b", (1, d)),
        (f"{prefix}.ln.gain", (1, d)),
        (f"{prefix}.ln.bias", (1, d)),
        (f"{prefix}.l2.w_self", (d, d)),
        (f"{prefix}.l2.w_mean", (d, d)),
        (f"{prefix}.l2.b", (1, d)),
    ]


def parameter_shapes(config: RefinerConfig) -> list[tuple[str, tuple[int, int]]]:
    """按固定顺序列出 (名称, 形状)；参数数量只由 config 决定。"""
    d = config.d
    shapes: list[tuple[str, tuple[int, int]]] = [
        ("input_embed.w", (config.in_features, d)),
        ("input_embed.b", (1, d)),
    ]
    hyper = config.mode is RefinerMode.HYPERGRAPH
    if hyper:
        shapes.append(("edge_init", (config.k_max, d)))
    for c in range(config.copies):
        cell = f"cell{c}"
        shapes += _deepsets_shapes(f"{cell}.phi_vrt", 2 * d, d)
        if hyper:
            shapes += _deepsets_shapes(f"{cell}.phi_edg", 2 * d, d)
            shapes += [
                (f"{cell}.phi_inc.w_vertex", (d, d)),
                (f"{cell}.phi_inc.w_edge", (d, d)),
            ]
        else:
            shapes.append((f"{cell}.phi_inc.w_pair", (d, d)))
        shapes += [
            (f"{cell}.phi_inc.b1", (1, d)),
            (f"{cell}.phi_inc.w_out", (d, 1)),
            (f"{cell}.phi_inc.b_out", (1, 1)),
        ]
        if hyper:
            shapes += [(f"{cell}.exist.w", (d, 1)), (f"{cell}.exist.b", (1, 1))]
    return shapes


def _initial_value(name: str, shape: tuple[int, int], rng: np.random.Generator) -> Array:
    leaf = name.rsplit(".", 1)[-1]
    if name == "edge_init":
        return rng.standard_normal(shape) / np.sqrt(shape[1])
    if leaf == "gain":
        return np.ones(shape)
    if leaf in {"b", "b1", "b_out", "bias"}:
        return np.zeros(shape)
    limit = np.sqrt(6.0 / (shape[0] + shape[1]))
    return rng.uniform(-limit, limit, size=shape)


@dataclass(frozen=True, slots=True)
class RefinerParams:
    config: RefinerConfig
    values: dict[str, Array]

    def __post_init__(self) -> None:
        expected = parameter_shapes(self.config)
        if [n for n, _ in expected] != list(self.values):
            raise RefinerConfigError("parameter names do not match the refiner config")
        for name, shape in expected:
            if self.values[name].shape != shape:
                raise RefinerConfigError(
                    f"{name}: expected shape {shape}, got {self.values[name].shape}"
                )

    def __iter__(self) -> Iterator[str]:
        return iter(self.values)

    def bind(self, tape: Tape) -> BoundParams:
        """把每个参数登记为磁带叶子（用于需要梯度的前向）。"""
        return BoundParams(self.config, {n: tape.leaf(v) for n, v in self.values.items()})

    def constants(self) -> BoundParams:
        """不记录梯度的前向。"""
        return BoundParams(self.config, {n: constant(v) for n, v in self.values.items()})

    def copy(self) -> RefinerParams:
        return RefinerParams(self.config, {n: v.copy() for n, v in self.values.items()})

    def replace(self, values: Mapping[str, Array]) -> RefinerParams:
        return RefinerParams(self.config, dict(values))


@dataclass(frozen=True, slots=True)
class BoundParams:
    config: RefinerConfig
    tensors: dict[str, Tensor]

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def cell(self, step: int) -> str:
        return f"cell{self.config.cell_index(step)}"

    def gradients(self, leaf_grads: Mapping[int, Array]) -> dict[str, Array]:
        """把 叶子编号 → 梯度 映射回参数名；未触达的参数不出现。"""
        out: dict[str, Array] = {}
        for name, tensor in self.tensors.items():
            if tensor.node is not None and tensor.node in leaf_grads:
                out[name] = leaf_grads[tensor.node]
        return out


def init_params(config: RefinerConfig, *, seed: int = 0) -> RefinerParams:
    rng = np.random.default_rng(seed)
    values = {name: _initial_value(name, shape, rng) for name, shape in parameter_shapes(config)}
    return RefinerParams(config, values)


def param_count(params: RefinerParams | RefinerConfig) -> int:
    config = params.config if isinstance(params, RefinerParams) else params
    return sum(rows * cols for _, (rows, cols) in parameter_shapes(config))


def describe(config: RefinerConfig) -> dict[str, Any]:
    return {"params": param_count(config), **config.model_dump(mode="json")}
