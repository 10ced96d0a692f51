"""点集采样。"""

from __future__ import annotations

from enum import Enum

import numpy as np

from hypergraph_refiner.domain.exceptions import InvalidInputError
from hypergraph_refiner.domain.value_objects import PointSet


class PointDistribution(str, Enum):
    GAUSSIAN = "gaussian"
    SPHERE = "sphere"
    UNIT_SQUARE = "unit_square"


def sample_points(
    dist: PointDistribution | str, n: int, dim: int, rng: np.random.Generator
) -> PointSet:
    """i.i.d. 采样：标准正态 / 单位球面（正态后归一化）/ 单位正方形 [0,1)²。"""
    dist = PointDistribution(dist)
    if n < 1 or dim < 1:
        raise InvalidInputError(f"need n >= 1 and dim >= 1, got n={n}, dim={dim}")
    if dist is PointDistribution.UNIT_SQUARE:
        if dim != 2:
            raise InvalidInputError(f"unit_square is two-dimensional, got dim={dim}")
        return PointSet(rng.random((n, 2)))
    coords = rng.standard_normal((n, dim))
    if dist is PointDistribution.SPHERE:
        if dim < 2:
            raise InvalidInputError("sphere needs dim >= 2")
        coords = coords / np.linalg.norm(coords, axis=1, keepdims=True)
    return PointSet(coords)
