"""应用层异常（CLI 据此映射退出码）。"""

from __future__ import annotations

from dataclasses import dataclass

from hypergraph_refiner.common.errors import HypergraphError


@dataclass(frozen=True, slots=True)
class ConfigError(HypergraphError):
    message: str
    line: int | None = None

    def describe(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        return f"config error: {where}{self.message}"


@dataclass(frozen=True, slots=True)
class UsageError(HypergraphError):
    message: str

    def describe(self) -> str:
        return self.message


@dataclass(frozen=True, slots=True)
class TaskMismatchError(HypergraphError):
    expected: str
    actual: str

    def describe(self) -> str:
        return f"task mismatch: expected '{self.expected}', got '{self.actual}'"


@dataclass(frozen=True, slots=True)
class DegeneracyExhaustedError(HypergraphError):
    index: int
    attempts: int

    def describe(self) -> str:
        return f"record {self.index}: still degenerate after {self.attempts} resamples"


@dataclass(frozen=True, slots=True)
class CheckpointFormatError(HypergraphError):
    path: str
    reason: str

    def describe(self) -> str:
        return f"{self.path}: invalid checkpoint ({self.reason})"


@dataclass(frozen=True, slots=True)
class DataFormatError(HypergraphError):
    path: str
    line: int
    reason: str

    def describe(self) -> str:
        return f"{self.path}:{self.line}: {self.reason}"
