from __future__ import annotations

import numpy as np
import pytest

from hypergraph_refiner.application.services.optimizer import AdamState, adam_step, gradient_norm
from hypergraph_refiner.autodiff import DimensionError
from hypergraph_refiner.model import RefinerParams


def test_first_step_moves_each_entry_by_learning_rate(hull_params: RefinerParams) -> None:
    adam = AdamState.for_params(hull_params)
    grad = np.array([[0.5, -2.0, 3.0, -0.25]])
    updated = adam_step(hull_params, {"input_embed.b": grad}, adam, lr=0.1)

    delta = updated.values["input_embed.b"] - hull_params.values["input_embed.b"]
    assert delta == pytest.approx(-0.1 * np.sign(grad), rel=1e-6)
    assert adam.steps["input_embed.b"] == 1


def test_parameters_without_gradient_are_left_alone(hull_params: RefinerParams) -> None:
    adam = AdamState.for_params(hull_params)
    updated = adam_step(hull_params, {"input_embed.b": np.ones((1, 4))}, adam, lr=0.1)

    assert np.array_equal(updated.values["edge_init"], hull_params.values["edge_init"])
    assert adam.steps["edge_init"] == 0
    assert not adam.m["edge_init"].any()


def test_step_counters_are_per_parameter(hull_params: RefinerParams) -> None:
    adam = AdamState.for_params(hull_params)
    params = adam_step(hull_params, {"input_embed.b": np.ones((1, 4))}, adam, lr=0.01)
    params = adam_step(params, {"input_embed.b": np.ones((1, 4))}, adam, lr=0.01)
    adam_step(params, {"edge_init": np.ones_like(params.values["edge_init"])}, adam, lr=0.01)

    assert adam.steps["input_embed.b"] == 2
    assert adam.steps["edge_init"] == 1


def test_original_params_are_not_mutated(hull_params: RefinerParams) -> None:
    before = hull_params.copy()
    adam_step(hull_params, {"input_embed.b": np.ones((1, 4))}, AdamState.for_params(hull_params), lr=1.0)
    assert np.array_equal(hull_params.values["input_embed.b"], before.values["input_embed.b"])


def test_rejects_unknown_names_and_wrong_shapes(hull_params: RefinerParams) -> None:
    adam = AdamState.for_params(hull_params)
    with pytest.raises(KeyError):
        adam_step(hull_params, {"nope": np.ones((1, 1))}, adam, lr=0.1)
    with pytest.raises(DimensionError):
        adam_step(hull_params, {"input_embed.b": np.ones((2, 4))}, adam, lr=0.1)


def test_gradient_norm_spans_all_parameters() -> None:
    assert gradient_norm({"a": np.array([[3.0]]), "b": np.array([[4.0, 0.0]])}) == pytest.approx(5.0)
    assert gradient_norm({}) == 0.0


def test_adam_descends_a_quadratic(hull_params: RefinerParams) -> None:
    adam = AdamState.for_params(hull_params)
    target = np.ones_like(hull_params.values["edge_init"])
    params = hull_params
    losses = []
    for _ in range(300):
        diff = params.values["edge_init"] - target
        losses.append(float(np.sum(diff * diff)))
        params = adam_step(params, {"edge_init": 2.0 * diff}, adam, lr=0.05)

    assert losses[10] < losses[0]
    assert losses[-1] < 0.05 * losses[0]
