from __future__ import annotations

import math

import numpy as np
import pytest

from hypergraph_refiner.autodiff import Tape, Tensor, constant, finite_difference_check
from hypergraph_refiner.domain.exceptions import CapacityError, ContractViolationError, InvalidInputError
from hypergraph_refiner.domain.services.matching import MatchResult
from hypergraph_refiner.model import LossWeights, adjacency_loss, example_loss, run, set_prediction_loss
from hypergraph_refiner.model.loss import match_slots, matching_cost, soft_f1, target_adjacency, target_incidence
from hypergraph_refiner.model.params import BoundParams
from hypergraph_refiner.model.refiner import RefinerState


def _state(inc: np.ndarray, sigma: np.ndarray | None) -> RefinerState:
    n, k = inc.shape
    V, E = constant(np.zeros((n, 2))), constant(np.zeros((k, 2)))  # noqa: N806
    return RefinerState(V, E, constant(inc), None if sigma is None else constant(sigma), 0)


def test_set_prediction_loss_hand_computed():
    state = _state(np.array([[0.8], [0.4]]), np.array([[0.9]]))
    loss = set_prediction_loss(state, [(0,)]).item()
    exist = -math.log(0.9)
    inc = (-math.log(0.8) - math.log(0.6)) / 2
    f1 = 2 * 0.72 / (0.72 + 0.36 + 1.0)
    assert loss == pytest.approx(exist + inc + (1 - f1), rel=1e-12)


def test_weights_scale_each_term():
    state = _state(np.array([[0.8], [0.4]]), np.array([[0.9]]))
    only_exist = set_prediction_loss(state, [(0,)], LossWeights(inc=0.0, exist=1.0, f1=0.0)).item()
    assert only_exist == pytest.approx(-math.log(0.9))


def test_perfect_prediction_has_near_zero_loss():
    target = target_incidence([(0, 1), (1, 2)], 3, 3)
    state = _state(target.matrix, target.mask[None, :])
    assert set_prediction_loss(state, [(0, 1), (1, 2)]).item() < 1e-5


def test_loss_is_invariant_to_edge_and_slot_order():
    rng = np.random.default_rng(9)
    inc = rng.uniform(0.05, 0.95, size=(5, 4))
    sigma = rng.uniform(0.05, 0.95, size=(1, 4))
    edges = [(0, 1, 2), (1, 3), (2, 3, 4)]
    base = set_prediction_loss(_state(inc, sigma), edges).item()

    reordered = set_prediction_loss(_state(inc, sigma), [edges[2], edges[0], edges[1]]).item()
    perm = np.array([2, 0, 3, 1])
    slots = set_prediction_loss(_state(inc[:, perm], sigma[:, perm]), edges).item()
    assert reordered == pytest.approx(base, rel=1e-12)
    assert slots == pytest.approx(base, rel=1e-12)


def test_no_positive_edges_uses_existence_term_only():
    sigma = np.array([[0.2, 0.6]])
    loss = set_prediction_loss(_state(np.full((3, 2), 0.5), sigma), []).item()
    assert loss == pytest.approx(-(math.log(0.8) + math.log(0.4)) / 2)


def test_too_few_slots_raises_capacity_error():
    with pytest.raises(CapacityError):
        set_prediction_loss(_state(np.full((3, 1), 0.5), np.array([[0.5]])), [(0, 1), (1, 2)])


def test_matching_cost_hand_value():
    cost = matching_cost([[0.8], [0.4]], [0.9], [[1.0], [0.0]], [1.0])
    expected = -math.log(0.8) - math.log(0.6) - math.log(0.9)
    assert cost.shape == (1, 1)
    assert cost[0, 0] == pytest.approx(expected)


def test_soft_f1_of_empty_sets_is_one():
    assert soft_f1(constant(np.zeros((2, 2))), constant(np.zeros((2, 2)))).item() == 1.0
    assert soft_f1(constant([[1.0, 0.0]]), constant([[1.0, 0.0]])).item() == pytest.approx(1.0)


def test_adjacency_loss_hand_computed():
    inc = constant([[0.5, 0.7], [0.7, 0.5]])
    loss = adjacency_loss(inc, [[0.0, 1.0], [1.0, 0.0]]).item()
    assert loss == pytest.approx(-math.log(0.7) + 1 - 2.8 / 3.4, rel=1e-12)


def test_adjacency_loss_rejects_asymmetric_prediction():
    with pytest.raises(ContractViolationError):
        adjacency_loss(constant([[0.5, 0.7], [0.2, 0.5]]), np.zeros((2, 2)))


def test_example_loss_dispatches_on_mode(graph_params):
    pts = np.random.default_rng(2).uniform(size=(4, 2))
    state = run(pts, 4, 1, graph_params.constants())[-1]
    value = example_loss(state, [(0, 1), (1, 2), (2, 3)], LossWeights()).item()
    assert np.isfinite(value) and value > 0


def test_set_prediction_loss_gradient_wrt_incidence_and_sigma():
    rng = np.random.default_rng(12)
    inc = rng.uniform(0.1, 0.9, size=(5, 4))
    sigma = rng.uniform(0.1, 0.9, size=(1, 4))
    edges = [(0, 1, 2), (2, 3), (1, 4)]
    V, E = constant(np.zeros((5, 2))), constant(np.zeros((4, 2)))  # noqa: N806

    def wrt_inc(t: Tensor) -> Tensor:
        return set_prediction_loss(RefinerState(V, E, t, constant(sigma), 0), edges)

    def wrt_sigma(t: Tensor) -> Tensor:
        return set_prediction_loss(RefinerState(V, E, constant(inc), t, 0), edges)

    assert finite_difference_check(wrt_inc, inc) < 1e-5
    assert finite_difference_check(wrt_sigma, sigma) < 1e-5


def test_unrolled_loss_gradient_wrt_edge_init(small_params, points):
    bound = small_params.constants()
    edges = [(0, 1, 2), (1, 3, 4)]

    def f(t: Tensor) -> Tensor:
        params = BoundParams(bound.config, {**bound.tensors, "edge_init": t})
        return set_prediction_loss(run(points, 3, 2, params)[-1], edges)

    assert finite_difference_check(f, small_params.values["edge_init"]) < 1e-5


def test_loss_is_differentiable_scalar(small_params, points):
    tape = Tape()
    bound = small_params.bind(tape)
    loss = set_prediction_loss(run(points, 3, 2, bound)[-1], [(0, 1, 2)])
    grads = bound.gradients(tape.backward(loss))
    assert loss.shape == (1, 1)
    assert "cell0.exist.w" in grads
    assert all(np.all(np.isfinite(g)) for g in grads.values())


def test_soft_f1_worked_example():
    assert soft_f1(constant([[0.5, 0.5]]), constant([[1.0, 0.0]])).item() == pytest.approx(0.5, rel=1e-12)


def test_soft_f1_stays_in_unit_interval_and_rises_towards_the_target():
    target = np.array([[1.0, 0.0, 1.0, 0.0]])
    start = np.array([[0.1, 0.9, 0.3, 0.6]])
    values = [
        soft_f1(constant((1 - a) * start + a * target), constant(target)).item() for a in np.linspace(0.0, 1.0, 11)
    ]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert all(later > earlier for earlier, later in zip(values, values[1:], strict=False))
    assert values[-1] == pytest.approx(1.0)


def test_adjacency_loss_of_uniform_prediction_is_ln_two_plus_f1_gap():
    n = 4
    target = target_adjacency([(0, 1), (1, 2), (2, 3)], n)
    uniform = constant(np.full((n, n), 0.5))
    bce_only = adjacency_loss(uniform, target, f1_weight=0.0).item()
    assert bce_only == pytest.approx(math.log(2.0), rel=1e-12)

    predicted = 0.5 * n * (n - 1)
    expected_f1 = 2 * 0.5 * target.sum() / (predicted + target.sum())
    assert adjacency_loss(uniform, target).item() == pytest.approx(math.log(2.0) + 1 - expected_f1, rel=1e-12)


@pytest.mark.parametrize(
    "name",
    [
        "edge_init",
        "cell0.phi_inc.w_vertex",
        "cell0.phi_inc.w_out",
        "cell0.phi_vrt.l1.w_self",
        "cell0.phi_vrt.l2.w_mean",
        "cell0.phi_edg.l1.w_mean",
        "cell0.exist.w",
    ],
)
def test_loss_gradient_wrt_parameters_with_matching_held_fixed(small_params, points, name):
    bound = small_params.constants()
    edges = [(0, 1, 2), (1, 3, 4)]
    held = match_slots(run(points, 3, 2, bound)[-1], edges)

    def f(t: Tensor) -> Tensor:
        params = BoundParams(bound.config, {**bound.tensors, name: t})
        return set_prediction_loss(run(points, 3, 2, params)[-1], edges, match=held)

    assert finite_difference_check(f, small_params.values[name]) < 1e-4


def test_held_matching_reproduces_the_solved_loss():
    rng = np.random.default_rng(4)
    state = _state(rng.uniform(0.1, 0.9, size=(5, 3)), rng.uniform(0.1, 0.9, size=(1, 3)))
    edges = [(0, 1), (2, 3, 4)]
    held = match_slots(state, edges)

    assert set_prediction_loss(state, edges, match=held).item() == set_prediction_loss(state, edges).item()


@pytest.mark.parametrize(
    "assignment",
    [(0, 1), (0, 0, None), (0, None, None), (0, 2, None)],
)
def test_held_matching_must_pair_every_target_edge(assignment):
    state = _state(np.full((4, 3), 0.5), np.full((1, 3), 0.5))
    with pytest.raises(InvalidInputError):
        set_prediction_loss(state, [(0, 1), (2, 3)], match=MatchResult(assignment, 0.0))
