"""模型层异常。"""

from __future__ import annotations

from dataclasses import dataclass

from hypergraph_refiner.common.errors import HypergraphError


@dataclass(frozen=True, slots=True)
class RefinerConfigError(HypergraphError):
    message: str

    def describe(self) -> str:
        return f"refiner configuration error: {self.message}"
