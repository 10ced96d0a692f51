"""合成划分任务：高斯簇中心 + 抖动，目标边即簇划分。"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from hypergraph_refiner.domain.exceptions import ContractViolationError, InvalidInputError
from hypergraph_refiner.domain.services.decoding import labels_to_edges
from hypergraph_refiner.domain.value_objects import (
    Edges,
    ExampleRecord,
    PointSet,
    TaskKind,
)

DEFAULT_JITTER = 0.3


def _draw(rng: np.random.Generator, bounds: tuple[int, int], name: str) -> int:
    low, high = bounds
    if low < 1 or high < low:
        raise InvalidInputError(f"{name} range must satisfy 1 <= min <= max, got {bounds}")
    return int(rng.integers(low, high + 1))


def synth_partition_sample(
    rng: np.random.Generator,
    n_range: tuple[int, int],
    c_range: tuple[int, int],
    dim_feat: int,
    *,
    jitter: float = DEFAULT_JITTER,
    centers: npt.NDArray[np.float64] | None = None,
) -> ExampleRecord:
    """空簇不产生边，因此边数可能小于抽到的簇数。"""
    if dim_feat < 1:
        raise InvalidInputError(f"feature dimension must be positive, got {dim_feat}")
    n = _draw(rng, n_range, "n")
    if centers is None:
        c = _draw(rng, c_range, "cluster")
        centers = rng.standard_normal((c, dim_feat))
    labels = rng.integers(0, centers.shape[0], size=n)
    coords = centers[labels] + jitter * rng.standard_normal((n, dim_feat))
    return ExampleRecord(PointSet(coords), labels_to_edges(labels).edges, TaskKind.PARTITION)


def labels_from_edges(edges: Edges, n: int) -> npt.NDArray[np.int64]:
    validate_partition(edges, n)
    labels = np.empty(n, dtype=np.int64)
    for label, edge in enumerate(edges):
        labels[list(edge)] = label
    return labels


def validate_partition(edges: Edges, n: int) -> None:
    """边两两不交且覆盖全部 n 个顶点。"""
    seen = [v for edge in edges for v in edge]
    if len(seen) != len(set(seen)):
        raise ContractViolationError("partition edges overlap")
    if sorted(seen) != list(range(n)):
        raise ContractViolationError(f"partition edges do not cover all {n} vertices")
