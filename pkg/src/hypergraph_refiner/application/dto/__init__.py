"""应用层 DTO。"""

from __future__ import annotations

from hypergraph_refiner.application.dto.log_rows import EpochLogRow, MetricsRow

__all__ = ["EpochLogRow", "MetricsRow"]
