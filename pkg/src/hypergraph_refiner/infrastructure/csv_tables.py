"""CSV 输出：训练日志、评测结果、实验表。未定义的字段写成空白。"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from dataclasses import astuple, fields
from pathlib import Path
from typing import Any, TextIO

from hypergraph_refiner.application.dto import EpochLogRow, MetricsRow

TRAIN_LOG_HEADER = [f.name for f in fields(EpochLogRow)]
METRICS_HEADER = [f.name for f in fields(MetricsRow)]


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(
    fh: TextIO,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    *,
    comment: str | None = None,
    include_header: bool = True,
) -> None:
    if comment is not None:
        fh.write(f"# {comment}\n")
    writer = csv.writer(fh, lineterminator="\n")
    if include_header:
        writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def write_train_log(path: Path, rows: Iterable[EpochLogRow]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        write_rows(fh, TRAIN_LOG_HEADER, (astuple(row) for row in rows))


def format_metrics_row(row: MetricsRow) -> str:
    return ",".join(_cell(v) for v in astuple(row))


def append_metrics_row(path: Path, row: MetricsRow) -> None:
    """文件不存在或为空时先写表头。"""
    path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", encoding="utf-8", newline="") as fh:
        write_rows(fh, METRICS_HEADER, [astuple(row)], include_header=fresh)


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]], *, comment: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        write_rows(fh, header, rows, comment=comment)
