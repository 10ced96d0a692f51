from __future__ import annotations

import numpy as np
import pytest
from scipy.spatial import Delaunay

from hypergraph_refiner.domain.exceptions import ContractViolationError, DegenerateInputError, InvalidInputError
from hypergraph_refiner.domain.services.delaunay import (
    adjacency_from_triangles,
    delaunay_bowyer_watson,
    delaunay_bruteforce,
    triangle_edges,
    validate_delaunay,
)
from hypergraph_refiner.domain.value_objects import PointSet, canonical_edges


def _square_sets(count: int, seed: int, n_max: int = 40):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(3, n_max + 1))
        yield PointSet(rng.random((n, 2)))


def test_bowyer_watson_matches_bruteforce():
    for pts in _square_sets(30, seed=0, n_max=25):
        triangles = delaunay_bowyer_watson(pts)
        assert triangles == delaunay_bruteforce(pts).triangles
        validate_delaunay(pts, triangles)


@pytest.mark.slow
def test_bowyer_watson_matches_bruteforce_sweep():
    for pts in _square_sets(500, seed=1):
        assert delaunay_bowyer_watson(pts) == delaunay_bruteforce(pts).triangles


def test_bowyer_watson_agrees_with_qhull():
    for pts in _square_sets(10, seed=2, n_max=60):
        expected = canonical_edges(Delaunay(pts.coords).simplices.tolist())
        assert delaunay_bowyer_watson(pts) == expected


def test_triangle_count_follows_euler_relation():
    # 四个角点 + 一个内点：4 个三角形
    pts = PointSet(np.array([[0.0, 0.0], [1.0, 0.1], [0.9, 1.0], [0.1, 0.8], [0.45, 0.52]]))
    result = delaunay_bruteforce(pts)
    assert len(result.triangles) == 2 * 5 - 2 - 4
    assert all(4 in tri for tri in result.triangles)
    assert result.edges == triangle_edges(result.triangles)


def test_single_triangle():
    pts = PointSet(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert delaunay_bowyer_watson(pts) == ((0, 1, 2),)
    adjacency = adjacency_from_triangles(((0, 1, 2),), 3)
    assert adjacency.tolist() == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_cocircular_points_are_degenerate():
    square = PointSet(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DegenerateInputError):
        delaunay_bruteforce(square)
    with pytest.raises(DegenerateInputError):
        delaunay_bowyer_watson(square)


def test_collinear_points_are_degenerate():
    line = PointSet(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DegenerateInputError):
        delaunay_bruteforce(line)


def test_non_planar_input_is_invalid():
    with pytest.raises(InvalidInputError):
        delaunay_bowyer_watson(PointSet(np.zeros((4, 3))))


def test_validate_delaunay_rejects_non_delaunay_triangulation():
    # 凸四边形的两种对角剖分中只有一种满足空圆
    pts = PointSet(np.array([[0.0, 0.0], [2.0, 0.0], [2.2, 1.0], [0.0, 1.2]]))
    good = delaunay_bruteforce(pts).triangles
    flipped = ((0, 1, 3), (1, 2, 3)) if good != ((0, 1, 3), (1, 2, 3)) else ((0, 1, 2), (0, 2, 3))
    validate_delaunay(pts, good)
    with pytest.raises(ContractViolationError):
        validate_delaunay(pts, flipped)
