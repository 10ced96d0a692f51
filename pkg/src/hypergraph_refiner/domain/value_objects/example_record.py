"""ExampleRecord 值对象与边的规范编码。

规范编码：每条边内顶点升序，边列表按字典序排序并去重。
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from hypergraph_refiner.domain.exceptions import InvalidInputError
from hypergraph_refiner.domain.value_objects.point_set import PointSet

Edge = tuple[int, ...]
Edges = tuple[Edge, ...]


class TaskKind(str, Enum):
    HULL = "hull"
    DELAUNAY = "delaunay"
    PARTITION = "partition"


def canonical_edges(edges: Iterable[Iterable[int]]) -> Edges:
    return tuple(sorted({tuple(sorted(int(v) for v in edge)) for edge in edges}))


@dataclass(frozen=True, slots=True)
class ExampleRecord:
    points: PointSet
    edges: Edges
    task: TaskKind

    def __post_init__(self) -> None:
        n = self.points.n
        for edge in self.edges:
            if not edge or any(v < 0 or v >= n for v in edge):
                raise InvalidInputError(f"edge {edge} has vertex indices outside [0, {n})")

    @property
    def n(self) -> int:
        return self.points.n
