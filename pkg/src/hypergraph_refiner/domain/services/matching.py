"""矩形代价矩阵上的最小代价单射匹配（边槽 → 目标边）。"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.optimize import linear_sum_assignment

from hypergraph_refiner.domain.exceptions import CapacityError, InvalidInputError


@dataclass(frozen=True, slots=True)
class MatchResult:
    assignment: tuple[int | None, ...]  # 边槽 j → 目标边 m，未匹配为 None
    total_cost: float

    def matched(self) -> list[tuple[int, int]]:
        """按目标顺序排列的 (边槽, 目标) 对。"""
        pairs = [(j, m) for j, m in enumerate(self.assignment) if m is not None]
        return sorted(pairs, key=lambda pair: pair[1])

    def unmatched(self) -> list[int]:
        return [j for j, m in enumerate(self.assignment) if m is None]


def hungarian(cost: npt.ArrayLike) -> MatchResult:
    """k×m（k ≥ m）代价矩阵补零代价虚拟列成方阵后求解。"""
    matrix = np.asarray(cost, dtype=np.float64)
    if matrix.ndim != 2:
        raise InvalidInputError(f"cost must be a k×m matrix, got shape {matrix.shape}")
    k, m = matrix.shape
    if k < m:
        raise CapacityError(slots=k, required=m)
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError("cost matrix must be finite")
    square = np.zeros((k, k))
    square[:, :m] = matrix
    rows, cols = linear_sum_assignment(square)
    assignment: list[int | None] = [None] * k
    total = 0.0
    for j, col in zip(rows.tolist(), cols.tolist(), strict=True):
        if col < m:
            assignment[j] = col
            total += float(matrix[j, col])
    return MatchResult(tuple(assignment), total)
