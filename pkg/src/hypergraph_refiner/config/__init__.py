"""配置包：环境配置与日志。"""

from __future__ import annotations

from hypergraph_refiner.config.logging import configure_logging, get_logger
from hypergraph_refiner.config.settings import Settings

__all__ = ["Settings", "configure_logging", "get_logger"]
