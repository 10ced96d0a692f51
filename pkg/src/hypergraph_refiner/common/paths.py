"""路径工具：以项目根目录为基准定位默认数据目录。"""

from __future__ import annotations

from pathlib import Path


def find_project_root(start: Path | None = None) -> Path:
    """向上查找含 pyproject.toml 或 .git 的目录；找不到时返回起点目录。"""
    current = (start or Path(__file__)).resolve()
    if current.is_file():
        current = current.parent
    for parent in [current, *current.parents]:
        if (parent / "pyproject.toml").exists() or (parent / ".git").exists():
            return parent
    return current


def default_data_dir() -> Path:
    return find_project_root() / "data"
