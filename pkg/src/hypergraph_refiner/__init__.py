"""
hypergraph_refiner 包

从点集预测（超）图：循环细化器、自动微分、几何 oracle 与训练流程。
"""

from __future__ import annotations

from hypergraph_refiner.config.settings import Settings
from hypergraph_refiner.model.params import RefinerConfig, init_params

__version__ = "0.1.0"

__all__ = ["RefinerConfig", "Settings", "init_params"]
