"""错误基类。

约定：
- 各层异常均为 frozen dataclass，字段即诊断信息
- `str(exc)` 返回可直接展示给用户的一行描述
"""

from __future__ import annotations


class HypergraphError(Exception):
    """可预期错误的公共基类（CLI 据此映射退出码）。"""

    def __str__(self) -> str:
        return self.describe()

    def describe(self) -> str:
        return type(self).__name__
