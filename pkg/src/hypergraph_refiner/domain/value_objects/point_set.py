"""PointSet 值对象。"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from hypergraph_refiner.domain.exceptions import InvalidInputError


@dataclass(frozen=True, slots=True, eq=False)
class PointSet:
    coords: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.coords.ndim != 2:
            raise InvalidInputError(f"point set must be n×dim, got shape {self.coords.shape}")
        if not np.all(np.isfinite(self.coords)):
            raise InvalidInputError("point coordinates must be finite")

    @property
    def n(self) -> int:
        return int(self.coords.shape[0])

    @property
    def dim(self) -> int:
        return int(self.coords.shape[1])
