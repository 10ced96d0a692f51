"""测试时解码规则。平局一律取较小下标。"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from hypergraph_refiner.common.constants import DECODE_THRESHOLD, SYMMETRY_TOL
from hypergraph_refiner.domain.exceptions import ContractViolationError, InvalidInputError
from hypergraph_refiner.domain.value_objects import EdgePrediction

Matrix = npt.NDArray[np.float64]


def decode_hull(incidence: npt.ArrayLike, sigma: npt.ArrayLike, dim: int) -> EdgePrediction:
    """σ_j > 0.5 的边槽取关联概率最高的 dim 个顶点。"""
    inc = np.asarray(incidence, dtype=np.float64)
    exist = np.asarray(sigma, dtype=np.float64).ravel()
    if inc.ndim != 2 or exist.shape[0] != inc.shape[1]:
        raise InvalidInputError(f"incidence {inc.shape} and sigma {exist.shape} do not conform")
    if not 1 <= dim <= inc.shape[0]:
        raise InvalidInputError(f"cannot pick {dim} vertices out of {inc.shape[0]}")
    edges = []
    for j in np.flatnonzero(exist > DECODE_THRESHOLD):
        # 稳定排序保证同分时下标小者优先
        order = np.argsort(-inc[:, j], kind="stable")
        edges.append(order[:dim].tolist())
    return EdgePrediction.of(edges)


def decode_partition(incidence: npt.ArrayLike) -> npt.NDArray[np.int64]:
    inc = np.asarray(incidence, dtype=np.float64)
    if inc.ndim != 2 or inc.shape[1] < 1:
        raise InvalidInputError(f"incidence must be n×k with k >= 1, got shape {inc.shape}")
    return np.argmax(inc, axis=1).astype(np.int64)


def check_symmetric(matrix: Matrix, *, tol: float = SYMMETRY_TOL) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractViolationError(f"adjacency must be square, got shape {matrix.shape}")
    gap = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if gap > tol:
        raise ContractViolationError(f"adjacency is not symmetric (max gap {gap:.3g})")


def decode_adjacency(incidence: npt.ArrayLike) -> EdgePrediction:
    adjacency = np.asarray(incidence, dtype=np.float64)
    check_symmetric(adjacency)
    rows, cols = np.nonzero(np.triu(adjacency > DECODE_THRESHOLD, k=1))
    return EdgePrediction.of(zip(rows.tolist(), cols.tolist(), strict=True))


def labels_to_edges(labels: npt.ArrayLike) -> EdgePrediction:
    """标签向量 → 划分（每个出现的标签一条边）。"""
    values = np.asarray(labels).ravel()
    return EdgePrediction.of(np.flatnonzero(values == label).tolist() for label in np.unique(values))
