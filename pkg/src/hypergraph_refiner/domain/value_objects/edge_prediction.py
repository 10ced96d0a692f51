"""EdgePrediction 值对象（解码后的超图）。"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from hypergraph_refiner.domain.value_objects.example_record import Edges, canonical_edges


@dataclass(frozen=True, slots=True)
class EdgePrediction:
    edges: Edges

    @classmethod
    def of(cls, edges: Iterable[Iterable[int]]) -> EdgePrediction:
        return cls(canonical_edges(edges))

    def __len__(self) -> int:
        return len(self.edges)

    def as_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.edges)
