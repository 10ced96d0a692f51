"""模型测试共用的小尺寸配置。"""

from __future__ import annotations

import numpy as np
import pytest

from hypergraph_refiner.model import RefinerConfig, RefinerMode, RefinerParams, Sharing, init_params


@pytest.fixture
def small_config() -> RefinerConfig:
    return RefinerConfig(in_features=3, d=4, k_max=4, mode=RefinerMode.HYPERGRAPH, sharing=Sharing.RECURRENT)


@pytest.fixture
def small_params(small_config: RefinerConfig) -> RefinerParams:
    return init_params(small_config, seed=11)


@pytest.fixture
def graph_params() -> RefinerParams:
    config = RefinerConfig(in_features=2, d=4, k_max=1, mode=RefinerMode.GRAPH)
    return init_params(config, seed=5)


@pytest.fixture
def points() -> np.ndarray:
    return np.random.default_rng(7).normal(size=(5, 3))
