"""稠密二维张量与反向模式微分磁带。

约定：
- 所有数值为 float64，形状恒为二维 (rows, cols)
- 张量持有 numpy 数组的只读语义：任何运算都生成新数组，不做原地修改
- 没有磁带节点的张量（常量 / detach 结果）既不接收也不传播梯度
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from hypergraph_refiner.autodiff.exceptions import TapeUsageError

Array = npt.NDArray[np.float64]
BackwardFn = Callable[[Array], Sequence[Array | None]]


def as_array(data: Any) -> Array:
    """把任意数值输入规范化为二维 float64 数组（拷贝）。"""
    arr = np.array(data, dtype=np.float64)
    if arr.ndim == 0:
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        return arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected at most 2 dimensions, got {arr.ndim}")
    return arr


class Tensor:
    """二维张量；`node` 为磁带上的节点编号（无则为常量）。"""

    __slots__ = ("value", "node", "tape")

    def __init__(self, value: Array, *, node: int | None = None, tape: Tape | None = None) -> None:
        self.value = value
        self.node = node
        self.tape = tape

    @property
    def rows(self) -> int:
        return int(self.value.shape[0])

    @property
    def cols(self) -> int:
        return int(self.value.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def requires_grad(self) -> bool:
        return self.node is not None

    def numpy(self) -> Array:
        return self.value

    def item(self) -> float:
        if self.value.size != 1:
            raise ValueError(f"item() needs a 1x1 tensor, got {self.rows}x{self.cols}")
        return float(self.value[0, 0])

    def __repr__(self) -> str:
        tag = f"node={self.node}" if self.node is not None else "const"
        return f"Tensor({self.rows}x{self.cols}, {tag})"

    # 运算符只做转发，语义以 ops 模块为准
    def __add__(self, other: Tensor) -> Tensor:
        from hypergraph_refiner.autodiff import ops

        return ops.add(self, other)

    def __sub__(self, other: Tensor) -> Tensor:
        from hypergraph_refiner.autodiff import ops

        return ops.sub(self, other)

    def __mul__(self, other: Tensor) -> Tensor:
        from hypergraph_refiner.autodiff import ops

        return ops.hadamard(self, other)

    def __matmul__(self, other: Tensor) -> Tensor:
        from hypergraph_refiner.autodiff import ops

        return ops.matmul(self, other)

    @property
    def T(self) -> Tensor:  # noqa: N802
        from hypergraph_refiner.autodiff import ops

        return ops.transpose(self)


def constant(data: Any) -> Tensor:
    """构造不参与微分的常量张量。"""
    return Tensor(as_array(data))


def detach(x: Tensor) -> Tensor:
    """返回数值相同、不在磁带上的张量；梯度不会穿过它。"""
    return Tensor(x.value)


@dataclass(frozen=True, slots=True)
class Node:
    kind: str
    inputs: tuple[int | None, ...]
    backward: BackwardFn | None


class Tape:
    """只追加的计算记录。

    - 节点编号即拓扑序：输入编号总是小于消费者编号
    - `checkpoint()` / `reset(mark)` 支持截断：丢弃 mark 之后的全部节点
    - 一条磁带只在单个线程内使用
    """

    def __init__(self) -> None:
        self._nodes: list[Node] = []
        self.peak_nodes = 0

    def __len__(self) -> int:
        return len(self._nodes)

    def kinds(self) -> list[str]:
        return [node.kind for node in self._nodes]

    def _append(self, node: Node) -> int:
        self._nodes.append(node)
        self.peak_nodes = max(self.peak_nodes, len(self._nodes))
        return len(self._nodes) - 1

    def leaf(self, data: Any) -> Tensor:
        """登记一个叶子（参数）节点。"""
        value = as_array(data)
        node_id = self._append(Node("leaf", (), None))
        return Tensor(value, node=node_id, tape=self)

    def record(
        self,
        kind: str,
        inputs: Sequence[Tensor],
        value: Array,
        backward: BackwardFn,
    ) -> Tensor:
        """当且仅当有输入在磁带上时记录节点，否则返回常量。"""
        ids: list[int | None] = []
        for tensor in inputs:
            if tensor.node is None:
                ids.append(None)
                continue
            if tensor.tape is not self:
                raise TapeUsageError(f"{kind}: inputs belong to different tapes")
            if tensor.node >= len(self._nodes):
                raise TapeUsageError(f"{kind}: input refers to a discarded node")
            ids.append(tensor.node)
        if all(i is None for i in ids):
            return Tensor(value)
        node_id = self._append(Node(kind, tuple(ids), backward))
        return Tensor(value, node=node_id, tape=self)

    def checkpoint(self) -> int:
        return len(self._nodes)

    def reset(self, mark: int) -> None:
        if mark < 0 or mark > len(self._nodes):
            raise TapeUsageError(f"checkpoint mark {mark} outside [0, {len(self._nodes)}]")
        del self._nodes[mark:]

    def backward(self, loss: Tensor) -> dict[int, Array]:
        """从标量 loss 反传，返回 叶子节点编号 → 梯度。

        不可达的叶子不会出现在结果里（缺失而非补零）。
        """
        if loss.shape != (1, 1):
            raise TapeUsageError(f"loss must be 1x1, got {loss.rows}x{loss.cols}")
        if loss.node is None or loss.tape is None:
            raise TapeUsageError("loss is not on a tape")
        if loss.tape is not self:
            raise TapeUsageError("loss belongs to a different tape")
        if loss.node >= len(self._nodes):
            raise TapeUsageError("loss refers to a discarded node")

        pending: dict[int, Array] = {loss.node: np.ones((1, 1))}
        leaf_grads: dict[int, Array] = {}
        for node_id in range(loss.node, -1, -1):
            grad = pending.pop(node_id, None)
            if grad is None:
                continue
            node = self._nodes[node_id]
            if node.backward is None:
                leaf_grads[node_id] = grad
                continue
            for input_id, input_grad in zip(node.inputs, node.backward(grad), strict=True):
                if input_id is None or input_grad is None:
                    continue
                prev = pending.get(input_id)
                pending[input_id] = input_grad if prev is None else prev + input_grad
        return leaf_grads


def backward(loss: Tensor) -> dict[int, Array]:
    """对 loss 所在磁带执行反传。"""
    if loss.tape is None:
        raise TapeUsageError("loss is not on a tape")
    return loss.tape.backward(loss)
