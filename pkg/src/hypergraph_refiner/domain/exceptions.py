"""领域层异常（几何 oracle、匹配、评测）。"""

from __future__ import annotations

from dataclasses import dataclass

from hypergraph_refiner.common.errors import HypergraphError


@dataclass(frozen=True, slots=True)
class DegenerateInputError(HypergraphError):
    reason: str

    def describe(self) -> str:
        return f"degenerate input: {self.reason}"


@dataclass(frozen=True, slots=True)
class CapacityError(HypergraphError):
    slots: int
    required: int

    def describe(self) -> str:
        return f"{self.slots} edge slots cannot hold {self.required} target edges (raise k_max)"


@dataclass(frozen=True, slots=True)
class InvalidInputError(HypergraphError):
    message: str

    def describe(self) -> str:
        return self.message


@dataclass(frozen=True, slots=True)
class ContractViolationError(HypergraphError):
    message: str

    def describe(self) -> str:
        return f"contract violation: {self.message}"
