from __future__ import annotations

import numpy as np
import pytest

from hypergraph_refiner.domain.exceptions import ContractViolationError, InvalidInputError
from hypergraph_refiner.domain.services.decoding import (
    decode_adjacency,
    decode_hull,
    decode_partition,
    labels_to_edges,
)


def test_decode_hull_keeps_existing_slots_and_top_vertices():
    inc = np.array(
        [
            [0.9, 0.1, 0.8],
            [0.8, 0.2, 0.1],
            [0.1, 0.9, 0.7],
            [0.7, 0.9, 0.2],
        ]
    )
    result = decode_hull(inc, [0.9, 0.2, 0.6], dim=3)
    assert result.edges == ((0, 1, 3), (0, 2, 3))


def test_decode_hull_ties_prefer_lower_index():
    inc = np.full((4, 1), 0.5)
    assert decode_hull(inc, [0.9], dim=2).edges == ((0, 1),)


def test_decode_hull_drops_duplicate_slots_and_threshold_is_strict():
    inc = np.array([[0.9, 0.9], [0.8, 0.8], [0.1, 0.1]])
    assert decode_hull(inc, [0.7, 0.8], dim=2).edges == ((0, 1),)
    assert decode_hull(inc, [0.5, 0.5], dim=2).edges == ()


def test_decode_hull_rejects_bad_shapes():
    with pytest.raises(InvalidInputError):
        decode_hull(np.zeros((3, 2)), [0.9], dim=2)
    with pytest.raises(InvalidInputError):
        decode_hull(np.zeros((2, 1)), [0.9], dim=3)


def test_decode_partition_and_labels_to_edges():
    inc = np.array([[0.2, 0.7], [0.6, 0.3], [0.5, 0.5], [0.1, 0.8]])
    labels = decode_partition(inc)
    assert labels.tolist() == [1, 0, 0, 1]
    assert labels_to_edges(labels).edges == ((0, 3), (1, 2))


def test_decode_adjacency_thresholds_upper_triangle():
    adjacency = np.array([[0.9, 0.6, 0.2], [0.6, 0.9, 0.51], [0.2, 0.51, 0.1]])
    assert decode_adjacency(adjacency).edges == ((0, 1), (1, 2))


def test_decode_adjacency_rejects_asymmetry():
    with pytest.raises(ContractViolationError):
        decode_adjacency(np.array([[0.0, 0.9], [0.1, 0.0]]))
