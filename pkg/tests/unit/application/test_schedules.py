from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from hypergraph_refiner.application.exceptions import ConfigError
from hypergraph_refiner.application.services.schedules import (
    ScheduleKind,
    TrainConfig,
    Window,
    sample_windows,
    schedule_windows,
)


def test_fixed_mode_picks_evenly_spaced_blocks_ending_at_the_last() -> None:
    rng = np.random.default_rng(0)
    assert sample_windows(16, 4, 2, "skips-fixed", rng) == [(4, 8), (12, 16)]
    assert sample_windows(16, 4, 1, "skips-fixed", rng) == [(12, 16)]
    assert sample_windows(16, 4, 4, "skips-fixed", rng) == [(0, 4), (4, 8), (8, 12), (12, 16)]
    assert sample_windows(24, 4, 2, "skips-fixed", rng) == [(8, 12), (20, 24)]


def test_random_mode_is_seeded_sorted_and_distinct() -> None:
    first = sample_windows(32, 4, 3, ScheduleKind.SKIPS_RANDOM, np.random.default_rng(9))
    again = sample_windows(32, 4, 3, ScheduleKind.SKIPS_RANDOM, np.random.default_rng(9))

    assert first == again
    assert first == sorted(first)
    assert len(set(first)) == 3
    assert all(end - start == 4 and start % 4 == 0 for start, end in first)


def test_random_mode_covers_every_block_over_many_draws() -> None:
    rng = np.random.default_rng(1)
    seen = {span for _ in range(200) for span in sample_windows(16, 4, 1, "skips-random", rng)}
    assert seen == {(0, 4), (4, 8), (8, 12), (12, 16)}


@pytest.mark.parametrize(
    ("t_total", "t_bptt", "n_bptt", "mode"),
    [
        (10, 4, 1, "skips-fixed"),
        (8, 16, 1, "skips-fixed"),
        (8, 4, 3, "skips-random"),
        (8, 4, 0, "skips-random"),
        (8, 4, 1, "truncated"),
    ],
)
def test_sample_windows_rejects_bad_arguments(t_total: int, t_bptt: int, n_bptt: int, mode: str) -> None:
    with pytest.raises(ConfigError):
        sample_windows(t_total, t_bptt, n_bptt, mode, np.random.default_rng(0))


def test_full_schedule_supervises_every_iteration_or_only_the_last() -> None:
    rng = np.random.default_rng(0)
    everything = TrainConfig(schedule=ScheduleKind.FULL, t_total=3)
    final = TrainConfig(schedule=ScheduleKind.FULL, t_total=3, supervise_all=False)

    assert schedule_windows(everything, rng) == [Window(0, 3, (1, 2, 3))]
    assert schedule_windows(final, rng) == [Window(0, 3, (3,))]
    assert schedule_windows(everything, rng, final_only=True) == [Window(0, 3, (3,))]


def test_truncated_windows_follow_the_stride() -> None:
    rng = np.random.default_rng(0)
    default = TrainConfig(schedule=ScheduleKind.TRUNCATED, t_total=8, t_bptt=4)
    overlapping = TrainConfig(schedule=ScheduleKind.TRUNCATED, t_total=8, t_bptt=4, stride=2)

    assert schedule_windows(default, rng) == [Window(0, 4, (4,)), Window(4, 8, (8,))]
    assert [(w.start, w.end) for w in schedule_windows(overlapping, rng)] == [(0, 2), (0, 4), (2, 6), (4, 8)]


def test_skips_windows_supervise_their_last_iteration() -> None:
    config = TrainConfig(schedule=ScheduleKind.SKIPS_FIXED, t_total=16, t_bptt=4, n_bptt=2)
    assert schedule_windows(config, np.random.default_rng(0)) == [Window(4, 8, (8,)), Window(12, 16, (16,))]


@pytest.mark.parametrize(
    "fields",
    [
        {"schedule": "skips-random", "t_total": 10, "t_bptt": 4},
        {"schedule": "skips-fixed", "t_total": 8, "t_bptt": 4, "n_bptt": 3},
        {"schedule": "truncated", "t_total": 4, "t_bptt": 8},
        {"schedule": "truncated", "t_total": 8, "t_bptt": 4, "stride": 9},
        {"lr": 0.0},
        {"t_total": 0},
    ],
)
def test_train_config_rejects_inconsistent_windows(fields: dict[str, object]) -> None:
    with pytest.raises(ValidationError):
        TrainConfig.model_validate(fields)


def test_full_schedule_ignores_window_arguments() -> None:
    config = TrainConfig(schedule=ScheduleKind.FULL, t_total=3, t_bptt=4, n_bptt=5)
    assert config.t_total == 3
    assert config.weights.f1 == 1.0
