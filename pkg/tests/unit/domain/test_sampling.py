from __future__ import annotations

import numpy as np
import pytest

from hypergraph_refiner.domain.exceptions import ContractViolationError, InvalidInputError
from hypergraph_refiner.domain.services.partition import (
    labels_from_edges,
    synth_partition_sample,
    validate_partition,
)
from hypergraph_refiner.domain.services.sampling import PointDistribution, sample_points
from hypergraph_refiner.domain.value_objects import TaskKind


def test_sphere_points_have_unit_norm():
    pts = sample_points(PointDistribution.SPHERE, 200, 3, np.random.default_rng(0))
    np.testing.assert_allclose(np.linalg.norm(pts.coords, axis=1), 1.0, atol=1e-12)


def test_unit_square_is_two_dimensional():
    pts = sample_points("unit_square", 50, 2, np.random.default_rng(0))
    assert pts.coords.min() >= 0.0 and pts.coords.max() < 1.0
    with pytest.raises(InvalidInputError):
        sample_points("unit_square", 5, 3, np.random.default_rng(0))


def test_sampling_is_deterministic_per_seed():
    a = sample_points("gaussian", 10, 4, np.random.default_rng(42)).coords
    b = sample_points("gaussian", 10, 4, np.random.default_rng(42)).coords
    assert np.array_equal(a, b)


def test_invalid_sampling_arguments():
    rng = np.random.default_rng(0)
    with pytest.raises(InvalidInputError):
        sample_points("sphere", 5, 1, rng)
    with pytest.raises(InvalidInputError):
        sample_points("gaussian", 0, 3, rng)
    with pytest.raises(ValueError):
        sample_points("cube", 5, 3, rng)


def test_partition_sample_covers_every_vertex():
    rng = np.random.default_rng(3)
    for _ in range(20):
        record = synth_partition_sample(rng, (5, 30), (2, 6), 4)
        assert record.task is TaskKind.PARTITION
        assert 5 <= record.n <= 30
        assert 1 <= len(record.edges) <= 6
        validate_partition(record.edges, record.n)


def test_partition_with_fixed_centers_and_zero_jitter():
    centers = np.array([[0.0, 0.0], [10.0, 10.0]])
    record = synth_partition_sample(np.random.default_rng(1), (8, 8), (2, 2), 2, jitter=0.0, centers=centers)
    labels = labels_from_edges(record.edges, record.n)
    for vertex, label in enumerate(labels):
        same = [v for edge in record.edges if vertex in edge for v in edge]
        assert labels[same].tolist() == [label] * len(same)
    assert {tuple(row) for row in record.points.coords} <= {(0.0, 0.0), (10.0, 10.0)}


def test_validate_partition_rejects_overlap_and_gaps():
    with pytest.raises(ContractViolationError):
        validate_partition(((0, 1), (1, 2)), 3)
    with pytest.raises(ContractViolationError):
        validate_partition(((0, 1),), 3)
    with pytest.raises(InvalidInputError):
        synth_partition_sample(np.random.default_rng(0), (5, 3), (2, 3), 2)
