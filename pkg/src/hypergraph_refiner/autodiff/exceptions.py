"""自动微分异常。"""

from __future__ import annotations

from dataclasses import dataclass

from hypergraph_refiner.common.errors import HypergraphError


@dataclass(frozen=True, slots=True)
class DimensionError(HypergraphError):
    op: str
    shapes: tuple[tuple[int, ...], ...]
    detail: str = ""

    def describe(self) -> str:
        shapes = ", ".join("x".join(str(s) for s in shape) for shape in self.shapes)
        suffix = f": {self.detail}" if self.detail else ""
        return f"{self.op}: incompatible shapes ({shapes}){suffix}"


@dataclass(frozen=True, slots=True)
class TapeUsageError(HypergraphError):
    reason: str

    def describe(self) -> str:
        return f"tape usage error: {self.reason}"
