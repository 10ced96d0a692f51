"""评测指标：边集合 P/R/F1、邻接准确率、ARI / RI。"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
import numpy.typing as npt
from sklearn.metrics import adjusted_rand_score, rand_score

from hypergraph_refiner.domain.exceptions import InvalidInputError
from hypergraph_refiner.domain.value_objects import EdgePrediction


@dataclass(frozen=True, slots=True)
class EdgeScores:
    precision: float
    recall: float
    f1: float
    accuracy: float | None = None


def edge_set_scores(pred: EdgePrediction, truth: EdgePrediction, *, n: int | None = None) -> EdgeScores:
    """集合交计数。传入 n 时（邻接任务）额外给出 C(n,2) 个无序对上的准确率。

    两边都为空视为完全一致（全部为 1）。
    """
    predicted, actual = pred.as_set(), truth.as_set()
    hits = len(predicted & actual)
    if not predicted and not actual:
        precision = recall = f1 = 1.0
    else:
        precision = hits / len(predicted) if predicted else 0.0
        recall = hits / len(actual) if actual else 0.0
        total = precision + recall
        f1 = 2.0 * precision * recall / total if total > 0 else 0.0
    accuracy = None
    if n is not None:
        pairs = comb(n, 2)
        wrong = len(predicted ^ actual)
        accuracy = (pairs - wrong) / pairs if pairs else 1.0
    return EdgeScores(precision, recall, f1, accuracy)


def _labelings(a: npt.ArrayLike, b: npt.ArrayLike) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    left, right = np.asarray(a).ravel(), np.asarray(b).ravel()
    if left.shape != right.shape:
        raise InvalidInputError(f"labelings differ in length: {left.size} vs {right.size}")
    if left.size < 2:
        raise InvalidInputError("pair-counting indices need at least 2 elements")
    return left, right


def ari(labels_a: npt.ArrayLike, labels_b: npt.ArrayLike) -> float:
    return float(adjusted_rand_score(*_labelings(labels_a, labels_b)))


def rand_index(labels_a: npt.ArrayLike, labels_b: npt.ArrayLike) -> float:
    return float(rand_score(*_labelings(labels_a, labels_b)))


def adjacency_from_incidence(incidence: npt.ArrayLike) -> npt.NDArray[np.int64]:
    """A = clip(I·Iᵀ, 0, 1)，对角置零；I 为 n×k 的 0/1 矩阵。"""
    inc = np.asarray(incidence, dtype=np.int64)
    if inc.ndim != 2:
        raise InvalidInputError(f"incidence must be n×k, got shape {inc.shape}")
    adjacency = np.clip(inc @ inc.T, 0, 1)
    np.fill_diagonal(adjacency, 0)
    return adjacency


def one_hot(labels: npt.ArrayLike) -> npt.NDArray[np.int64]:
    values = np.asarray(labels, dtype=np.int64).ravel()
    width = int(values.max()) + 1 if values.size else 0
    out = np.zeros((values.size, width), dtype=np.int64)
    out[np.arange(values.size), values] = 1
    return out


def adjacency_edges(adjacency: npt.ArrayLike) -> EdgePrediction:
    rows, cols = np.nonzero(np.triu(np.asarray(adjacency), k=1))
    return EdgePrediction.of(zip(rows.tolist(), cols.tolist(), strict=True))


def partition_pair_edges(labels: npt.ArrayLike) -> EdgePrediction:
    """同簇顶点对（划分任务上的 F1 在这些对上计算）。"""
    return adjacency_edges(adjacency_from_incidence(one_hot(labels)))
