"""值对象定义。"""

from __future__ import annotations

from hypergraph_refiner.domain.value_objects.edge_prediction import EdgePrediction
from hypergraph_refiner.domain.value_objects.example_record import (
    Edge,
    Edges,
    ExampleRecord,
    TaskKind,
    canonical_edges,
)
from hypergraph_refiner.domain.value_objects.point_set import PointSet

__all__ = [
    "Edge",
    "EdgePrediction",
    "Edges",
    "ExampleRecord",
    "PointSet",
    "TaskKind",
    "canonical_edges",
]
