"""二维 Delaunay oracle：暴力空外接圆检验与 Bowyer–Watson 增量插入。"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import numpy.typing as npt

from hypergraph_refiner.common.constants import GEOMETRY_TOL
from hypergraph_refiner.domain.exceptions import (
    ContractViolationError,
    DegenerateInputError,
    InvalidInputError,
)
from hypergraph_refiner.domain.services.convex_hull import convex_hull_bruteforce
from hypergraph_refiner.domain.value_objects import Edges, PointSet, canonical_edges

Coords = npt.NDArray[np.float64]


@dataclass(frozen=True, slots=True, eq=False)
class Triangulation:
    triangles: Edges
    adjacency: npt.NDArray[np.int64]

    @property
    def edges(self) -> Edges:
        return triangle_edges(self.triangles)


def _orient(a: Coords, b: Coords, c: Coords) -> Coords:
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (
        c[..., 0] - a[..., 0]
    )


def _incircle(a: Coords, b: Coords, c: Coords, d: Coords) -> Coords:
    """对逆时针 (a, b, c)：d 在外接圆内为正，圆外为负。支持广播。"""
    adx, ady = a[..., 0] - d[..., 0], a[..., 1] - d[..., 1]
    bdx, bdy = b[..., 0] - d[..., 0], b[..., 1] - d[..., 1]
    cdx, cdy = c[..., 0] - d[..., 0], c[..., 1] - d[..., 1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    return (
        alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
    )


def _check_planar(points: PointSet) -> None:
    if points.dim != 2:
        raise InvalidInputError(f"Delaunay triangulation is two-dimensional, got dim={points.dim}")
    if points.n < 3:
        raise InvalidInputError(f"Delaunay triangulation needs at least 3 points, got {points.n}")


def triangle_edges(triangles: Edges) -> Edges:
    return canonical_edges(pair for tri in triangles for pair in combinations(tri, 2))


def adjacency_from_triangles(triangles: Edges, n: int) -> npt.NDArray[np.int64]:
    adjacency = np.zeros((n, n), dtype=np.int64)
    for i, j in triangle_edges(triangles):
        adjacency[i, j] = adjacency[j, i] = 1
    return adjacency


def _ccw_triples(coords: Coords) -> npt.NDArray[np.int64]:
    triples = np.array(list(combinations(range(coords.shape[0]), 3)), dtype=np.int64)
    orient = _orient(coords[triples[:, 0]], coords[triples[:, 1]], coords[triples[:, 2]])
    if np.any(np.abs(orient) < GEOMETRY_TOL):
        raise DegenerateInputError("three collinear points")
    triples[orient < 0] = triples[orient < 0][:, [0, 2, 1]]
    return triples


def _empty_circumcircles(coords: Coords, triples: npt.NDArray[np.int64]) -> npt.NDArray[np.bool_]:
    a, b, c = (coords[triples[:, i]][:, None, :] for i in range(3))
    values = _incircle(a, b, c, coords[None, :, :])
    member = np.zeros(values.shape, dtype=bool)
    member[np.arange(triples.shape[0])[:, None], triples] = True
    if np.any((np.abs(values) <= GEOMETRY_TOL) & ~member):
        raise DegenerateInputError("four cocircular points")
    return ((values < 0) | member).all(axis=1)


def delaunay_bruteforce(points: PointSet) -> Triangulation:
    """枚举全部三元组，保留外接圆内严格没有其他点的三角形。"""
    _check_planar(points)
    triples = _ccw_triples(points.coords)
    keep = _empty_circumcircles(points.coords, triples)
    triangles = canonical_edges(triples[keep].tolist())
    return Triangulation(triangles, adjacency_from_triangles(triangles, points.n))


def _conflicts(coords: Coords, tri: tuple[int, int, int], p: Coords, ghost: int) -> bool:
    """p 是否落在 tri 的外接圆内；含幽灵顶点的三角形以其外侧开半平面代替外接圆。"""
    if ghost in tri:
        rot = tri.index(ghost)
        a, b = tri[(rot + 1) % 3], tri[(rot + 2) % 3]
        side = float(_orient(coords[a], coords[b], p))
        if abs(side) < GEOMETRY_TOL:
            raise DegenerateInputError(f"point collinear with hull edge ({a}, {b})")
        return side > 0
    value = float(_incircle(coords[tri[0]], coords[tri[1]], coords[tri[2]], p))
    if abs(value) <= GEOMETRY_TOL:
        raise DegenerateInputError(f"point cocircular with triangle {tri}")
    return value > 0


def delaunay_bowyer_watson(points: PointSet) -> Edges:
    """逐点插入：删除外接圆包含新点的三角形，用空腔边界连接新点。

    凸包外侧用一个幽灵顶点（编号 n）表示，三角形一律逆时针存储。
    """
    _check_planar(points)
    n = points.n
    coords = points.coords
    ghost = n
    c = next(
        (i for i in range(2, n) if abs(float(_orient(coords[0], coords[1], coords[i]))) >= GEOMETRY_TOL),
        None,
    )
    if c is None:
        raise DegenerateInputError("all points are collinear")
    a, b = (0, 1) if _orient(coords[0], coords[1], coords[c]) > 0 else (1, 0)
    triangles = {(a, b, c), (b, a, ghost), (c, b, ghost), (a, c, ghost)}
    for idx in range(2, n):
        if idx == c:
            continue
        p = coords[idx]
        bad = [tri for tri in triangles if _conflicts(coords, tri, p, ghost)]
        directed = {(t[i], t[(i + 1) % 3]) for t in bad for i in range(3)}
        triangles.difference_update(bad)
        triangles.update((u, v, idx) for u, v in directed if (v, u) not in directed)
    return canonical_edges(t for t in triangles if ghost not in t)


def validate_delaunay(points: PointSet, triangles: Edges) -> None:
    """按定义复核：外接圆为空，且三角形数 = 2n − 2 − h。"""
    _check_planar(points)
    if not triangles or any(len(t) != 3 for t in triangles):
        raise ContractViolationError("triangulation must be a non-empty list of triangles")
    triples = np.array(triangles, dtype=np.int64)
    orient = _orient(*(points.coords[triples[:, i]] for i in range(3)))
    triples[orient < 0] = triples[orient < 0][:, [0, 2, 1]]
    if not _empty_circumcircles(points.coords, triples).all():
        raise ContractViolationError("a triangle's circumcircle contains another point")
    hull_vertices = {v for edge in convex_hull_bruteforce(points) for v in edge}
    expected = 2 * points.n - 2 - len(hull_vertices)
    if len(triangles) != expected:
        raise ContractViolationError(
            f"{len(triangles)} triangles, Euler relation expects {expected}"
        )
