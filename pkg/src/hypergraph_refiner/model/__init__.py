"""Refiner 模型、参数与损失。"""

from __future__ import annotations

from hypergraph_refiner.model.loss import LossWeights, adjacency_loss, example_loss, set_prediction_loss
from hypergraph_refiner.model.params import (
    RefinerConfig,
    RefinerMode,
    RefinerParams,
    Sharing,
    init_params,
    param_count,
)
from hypergraph_refiner.model.refiner import RefinerState, incidence, init_state, refine_step, run, unroll

__all__ = [
    "LossWeights",
    "RefinerConfig",
    "RefinerMode",
    "RefinerParams",
    "RefinerState",
    "Sharing",
    "adjacency_loss",
    "example_loss",
    "incidence",
    "init_params",
    "init_state",
    "param_count",
    "refine_step",
    "run",
    "set_prediction_loss",
    "unroll",
]
