"""HSET v1 数据集文件（纯文本、按行）。

    #HSET v1 task=<hull|delaunay|partition> dim=<int>
    record n=<int> k=<int>
    <n 行坐标，空格分隔，最短往返十进制>
    <k 行升序顶点下标>
    end
"""

from __future__ import annotations

import re
from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path
from types import TracebackType
from typing import TextIO

import numpy as np

from hypergraph_refiner.application.exceptions import DataFormatError
from hypergraph_refiner.common.constants import DATASET_MAGIC
from hypergraph_refiner.common.errors import HypergraphError
from hypergraph_refiner.domain.value_objects import ExampleRecord, PointSet, TaskKind, canonical_edges

_HEADER = re.compile(rf"^{re.escape(DATASET_MAGIC)} task=(\w+) dim=(\d+)$")
_RECORD = re.compile(r"^record n=(\d+) k=(\d+)$")


def format_header(task: TaskKind, dim: int) -> str:
    return f"{DATASET_MAGIC} task={task.value} dim={dim}\n"


def format_record(record: ExampleRecord) -> str:
    lines = [f"record n={record.n} k={len(record.edges)}"]
    lines += [" ".join(repr(float(x)) for x in row) for row in record.points.coords]
    lines += [" ".join(str(v) for v in edge) for edge in canonical_edges(record.edges)]
    lines.append("end")
    return "\n".join(lines) + "\n"


class DatasetWriter:
    """按下标顺序追加记录；打开即写表头，因此 0 条记录也是合法文件。"""

    def __init__(self, path: Path, *, task: TaskKind, dim: int) -> None:
        self.path = path
        self.task = task
        self.dim = dim
        self.count = 0
        path.parent.mkdir(parents=True, exist_ok=True)
        self._fh: TextIO = path.open("w", encoding="utf-8", newline="\n")
        self._fh.write(format_header(task, dim))

    def write(self, record: ExampleRecord) -> None:
        if record.task is not self.task or record.points.dim != self.dim:
            raise ValueError(
                f"record ({record.task.value}, dim={record.points.dim}) does not fit "
                f"file ({self.task.value}, dim={self.dim})"
            )
        self._fh.write(format_record(record))
        self.count += 1

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> DatasetWriter:
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()


@dataclass(frozen=True, slots=True)
class Dataset:
    task: TaskKind
    dim: int
    records: tuple[ExampleRecord, ...]

    def __len__(self) -> int:
        return len(self.records)


class _Lines:
    def __init__(self, path: Path, text: str) -> None:
        self.path = path
        self._lines = text.splitlines()
        self.number = 0

    def __iter__(self) -> Iterator[str]:
        return self

    def __next__(self) -> str:
        if self.number >= len(self._lines):
            raise StopIteration
        self.number += 1
        return self._lines[self.number - 1]

    def take(self, what: str) -> str:
        try:
            return next(self)
        except StopIteration:
            raise self.error(f"unexpected end of file, expected {what}") from None

    def error(self, reason: str) -> DataFormatError:
        return DataFormatError(path=str(self.path), line=self.number, reason=reason)


def _parse_record(lines: _Lines, header: str, task: TaskKind, dim: int) -> ExampleRecord:
    match = _RECORD.match(header)
    if match is None:
        raise lines.error(f"expected 'record n=<int> k=<int>', got {header!r}")
    n, k = int(match.group(1)), int(match.group(2))
    rows = []
    for _ in range(n):
        line = lines.take("a coordinate row")
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError:
            raise lines.error(f"malformed coordinate row {line!r}") from None
        if len(row) != dim:
            raise lines.error(f"expected {dim} coordinates, got {len(row)}")
        rows.append(row)
    edges = []
    for _ in range(k):
        line = lines.take("an edge row")
        try:
            edge = [int(tok) for tok in line.split()]
        except ValueError:
            raise lines.error(f"malformed edge row {line!r}") from None
        if not edge or edge != sorted(set(edge)):
            raise lines.error("edge vertices must be distinct and ascending")
        edges.append(tuple(edge))
    if lines.take("'end'") != "end":
        raise lines.error("expected 'end'")
    try:
        coords = np.array(rows, dtype=np.float64).reshape(n, dim)
        return ExampleRecord(PointSet(coords), tuple(edges), task)
    except HypergraphError as exc:
        raise lines.error(str(exc)) from None


def read_dataset(path: Path) -> Dataset:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(path=str(path), line=0, reason=f"cannot read file ({exc.strerror})") from None
    lines = _Lines(path, text)
    header = _HEADER.match(lines.take("the dataset header"))
    if header is None:
        raise lines.error(f"expected '{DATASET_MAGIC} task=<task> dim=<int>'")
    try:
        task = TaskKind(header.group(1))
    except ValueError:
        raise lines.error(f"unknown task {header.group(1)!r}") from None
    dim = int(header.group(2))
    records = []
    for line in lines:
        if line.strip():
            records.append(_parse_record(lines, line, task, dim))
    return Dataset(task, dim, tuple(records))


def write_dataset(path: Path, task: TaskKind, dim: int, records: list[ExampleRecord]) -> int:
    with DatasetWriter(path, task=task, dim=dim) as writer:
        for record in records:
            writer.write(record)
    return writer.count
