"""最小反向模式自动微分（二维 float64 张量）。"""

from __future__ import annotations

from hypergraph_refiner.autodiff.exceptions import DimensionError, TapeUsageError
from hypergraph_refiner.autodiff.gradcheck import finite_difference_check
from hypergraph_refiner.autodiff.ops import PRIMITIVE_KINDS, primitive_forward
from hypergraph_refiner.autodiff.tensor import Tape, Tensor, backward, constant, detach

__all__ = [
    "PRIMITIVE_KINDS",
    "DimensionError",
    "Tape",
    "TapeUsageError",
    "Tensor",
    "backward",
    "constant",
    "detach",
    "finite_difference_check",
    "primitive_forward",
]
