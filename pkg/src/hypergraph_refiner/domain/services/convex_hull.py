"""凸包 oracle。

- `convex_hull_bruteforce`：任意维度，枚举全部 C(n, dim) 个子集做单侧超平面检验
- `convex_hull_3d_incremental`：三维增量插入（可见面删除 + 地平线重新三角化）

两者在一般位置输入上给出完全相同的 facet 集合；距离落在容差内即视为退化。
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
import numpy.typing as npt

from hypergraph_refiner.common.constants import GEOMETRY_TOL
from hypergraph_refiner.domain.exceptions import (
    ContractViolationError,
    DegenerateInputError,
    InvalidInputError,
)
from hypergraph_refiner.domain.value_objects import Edges, PointSet, canonical_edges

_CHUNK = 20_000

Coords = npt.NDArray[np.float64]
Index = npt.NDArray[np.int64]


def _hyperplanes(coords: Coords, subsets: Index) -> tuple[Coords, Coords]:
    """每个 dim 子集张成的超平面：单位法向 (C×dim) 与偏移 (C,)。"""
    dim = coords.shape[1]
    base = coords[subsets[:, 0]]
    spans = coords[subsets[:, 1:]] - base[:, None, :]
    normals = np.empty((subsets.shape[0], dim))
    for j in range(dim):
        minor = np.delete(spans, j, axis=2)
        normals[:, j] = (-1.0) ** j * np.linalg.det(minor)
    norms = np.linalg.norm(normals, axis=1)
    if np.any(norms < GEOMETRY_TOL):
        raise DegenerateInputError(f"{dim} affinely dependent points")
    normals /= norms[:, None]
    return normals, np.einsum("cd,cd->c", normals, base)


def _one_sided(coords: Coords, subsets: Index) -> npt.NDArray[np.bool_]:
    n = coords.shape[0]
    normals, offsets = _hyperplanes(coords, subsets)
    dist = coords @ normals.T - offsets
    member = np.zeros(dist.shape, dtype=bool)
    member[subsets.T, np.arange(subsets.shape[0])] = True
    if np.any((np.abs(dist) < GEOMETRY_TOL) & ~member):
        raise DegenerateInputError(f"{subsets.shape[1] + 1} of {n} points lie on one hyperplane")
    positive = ((dist > 0) | member).all(axis=0)
    negative = ((dist < 0) | member).all(axis=0)
    return positive | negative


def _check_size(points: PointSet) -> None:
    if points.dim < 2:
        raise InvalidInputError(f"convex hull needs dim >= 2, got {points.dim}")
    if points.n < points.dim + 1:
        raise InvalidInputError(f"convex hull in {points.dim}D needs at least {points.dim + 1} points, got {points.n}")


def convex_hull_bruteforce(points: PointSet) -> Edges:
    _check_size(points)
    coords = points.coords
    subsets = np.array(list(combinations(range(points.n), points.dim)), dtype=np.int64)
    facets: list[Index] = []
    for start in range(0, subsets.shape[0], _CHUNK):
        chunk = subsets[start : start + _CHUNK]
        facets.append(chunk[_one_sided(coords, chunk)])
    return canonical_edges(np.concatenate(facets).tolist())


def _plane(coords: Coords, face: tuple[int, int, int]) -> tuple[Coords, float]:
    a, b, c = (coords[i] for i in face)
    normal = np.cross(b - a, c - a)
    norm = float(np.linalg.norm(normal))
    if norm < GEOMETRY_TOL:
        raise DegenerateInputError(f"collinear triple {face}")
    normal = normal / norm
    return normal, float(normal @ a)


def _initial_simplex(coords: Coords) -> tuple[int, int, int, int]:
    n = coords.shape[0]
    i0 = 0
    i1 = next((i for i in range(1, n) if np.linalg.norm(coords[i] - coords[i0]) > GEOMETRY_TOL), None)
    if i1 is None:
        raise DegenerateInputError("all points coincide")
    axis = coords[i1] - coords[i0]
    i2 = next(
        (i for i in range(n) if np.linalg.norm(np.cross(axis, coords[i] - coords[i0])) > GEOMETRY_TOL),
        None,
    )
    if i2 is None:
        raise DegenerateInputError("all points are collinear")
    normal, offset = _plane(coords, (i0, i1, i2))
    i3 = next((i for i in range(n) if abs(normal @ coords[i] - offset) > GEOMETRY_TOL), None)
    if i3 is None:
        raise DegenerateInputError("all points are coplanar")
    return i0, i1, i2, i3


def convex_hull_3d_incremental(points: PointSet) -> Edges:
    if points.dim != 3:
        raise InvalidInputError(f"incremental hull is three-dimensional, got dim={points.dim}")
    _check_size(points)
    coords = points.coords
    simplex = _initial_simplex(coords)
    interior = coords[list(simplex)].mean(axis=0)

    # 面按外法向定向存储：(a, b, c) 的法向 (b-a)×(c-a) 指向外侧
    faces: dict[tuple[int, int, int], tuple[Coords, float]] = {}
    for a, b, c in combinations(simplex, 3):
        face = (a, b, c)
        normal, offset = _plane(coords, face)
        if normal @ interior - offset > 0:
            face = (a, c, b)
            normal, offset = -normal, -offset
        faces[face] = (normal, offset)

    inserted = set(simplex)
    for idx in range(points.n):
        if idx in inserted:
            continue
        p = coords[idx]
        visible = []
        for face, (normal, offset) in faces.items():
            dist = float(normal @ p - offset)
            if abs(dist) < GEOMETRY_TOL:
                raise DegenerateInputError(f"point {idx} is coplanar with face {face}")
            if dist > 0:
                visible.append(face)
        inserted.add(idx)
        if not visible:
            continue
        directed = {(f[i], f[(i + 1) % 3]) for f in visible for i in range(3)}
        horizon = [(u, v) for u, v in directed if (v, u) not in directed]
        for face in visible:
            del faces[face]
        for u, v in horizon:
            face = (u, v, idx)
            faces[face] = _plane(coords, face)
    return canonical_edges(faces)


def validate_hull(points: PointSet, facets: Edges) -> None:
    """按定义复核：每个 facet 单侧；三维时 F = 2·V_hull − 4。"""
    _check_size(points)
    if not facets:
        raise ContractViolationError("hull has no facets")
    if any(len(f) != points.dim for f in facets):
        raise ContractViolationError(f"hull facets must have {points.dim} vertices")
    subsets = np.array(facets, dtype=np.int64)
    if not _one_sided(points.coords, subsets).all():
        raise ContractViolationError("a hull facet has points on both sides")
    if points.dim == 3:
        vertices = {v for f in facets for v in f}
        if len(facets) != 2 * len(vertices) - 4:
            raise ContractViolationError(
                f"{len(facets)} facets over {len(vertices)} hull vertices breaks F = 2V - 4"
            )
