"""HRF1 检查点：二进制参数表 + JSON 边车文件。

二进制布局（全部小端）：
    b"HRF1"
    重复：name_len u32 | name utf-8 | rank u32 (=2) | rows u32 | cols u32 | rows·cols 个 float64

边车文件 `<path>.json` 保存 refiner 配置、任务与 T_total，评测时据此重建模型并检查任务。
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hypergraph_refiner.application.exceptions import CheckpointFormatError
from hypergraph_refiner.common.constants import CHECKPOINT_MAGIC
from hypergraph_refiner.common.errors import HypergraphError
from hypergraph_refiner.domain.value_objects import TaskKind
from hypergraph_refiner.model.params import RefinerConfig, RefinerParams

_U32 = struct.Struct("<I")


@dataclass(frozen=True, slots=True)
class Checkpoint:
    params: RefinerParams
    task: TaskKind
    t_total: int


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def encode_params(params: RefinerParams) -> bytes:
    chunks = [CHECKPOINT_MAGIC]
    for name, value in params.values.items():
        raw = name.encode("utf-8")
        rows, cols = value.shape
        chunks += [_U32.pack(len(raw)), raw, _U32.pack(2), _U32.pack(rows), _U32.pack(cols)]
        chunks.append(np.ascontiguousarray(value, dtype="<f8").tobytes())
    return b"".join(chunks)


def decode_params(data: bytes, *, source: str = "<bytes>") -> dict[str, np.ndarray]:
    def fail(reason: str) -> CheckpointFormatError:
        return CheckpointFormatError(path=source, reason=reason)

    if data[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise fail("bad magic bytes")
    offset = len(CHECKPOINT_MAGIC)
    values: dict[str, np.ndarray] = {}

    def u32() -> int:
        nonlocal offset
        if offset + _U32.size > len(data):
            raise fail(f"truncated at byte {offset}")
        (value,) = _U32.unpack_from(data, offset)
        offset += _U32.size
        return int(value)

    while offset < len(data):
        name_len = u32()
        if offset + name_len > len(data):
            raise fail(f"truncated parameter name at byte {offset}")
        try:
            name = data[offset : offset + name_len].decode("utf-8")
        except UnicodeDecodeError:
            raise fail(f"parameter name at byte {offset} is not UTF-8") from None
        offset += name_len
        rank = u32()
        if rank != 2:
            raise fail(f"{name}: rank {rank}, expected 2")
        rows, cols = u32(), u32()
        size = rows * cols * 8
        if offset + size > len(data):
            raise fail(f"{name}: expected {size} bytes of data, {len(data) - offset} left")
        if name in values:
            raise fail(f"duplicate parameter {name}")
        flat = np.frombuffer(data, dtype="<f8", count=rows * cols, offset=offset)
        values[name] = flat.astype(np.float64).reshape(rows, cols)
        offset += size
    return values


def save_checkpoint(path: Path, params: RefinerParams, *, task: TaskKind, t_total: int) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_params(params))
    meta = {"task": task.value, "t_total": t_total, "model": params.config.model_dump(mode="json")}
    sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_checkpoint(path: Path) -> Checkpoint:
    source = str(path)
    try:
        data = path.read_bytes()
        meta = json.loads(sidecar_path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CheckpointFormatError(path=source, reason=f"cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise CheckpointFormatError(path=source, reason=f"bad sidecar JSON ({exc.msg})") from None
    values = decode_params(data, source=source)
    try:
        config = RefinerConfig.model_validate(meta["model"])
        params = RefinerParams(config, values)
        return Checkpoint(params, TaskKind(meta["task"]), int(meta["t_total"]))
    except (KeyError, ValueError, HypergraphError) as exc:
        raise CheckpointFormatError(path=source, reason=f"parameters do not match sidecar ({exc})") from None
