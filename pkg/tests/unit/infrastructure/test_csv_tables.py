from __future__ import annotations

from pathlib import Path

from hypergraph_refiner.application.dto import EpochLogRow, MetricsRow
from hypergraph_refiner.infrastructure.csv_tables import (
    append_metrics_row,
    format_metrics_row,
    write_table,
    write_train_log,
)


def test_metrics_header_is_written_once(tmp_path: Path) -> None:
    path = tmp_path / "out" / "metrics.csv"
    append_metrics_row(path, MetricsRow("hull", "test", 10, 10, 0.5, 0.25, 1 / 3))
    append_metrics_row(path, MetricsRow("delaunay", "val", 5, 9, 1.0, 1.0, 1.0, accuracy=0.75))

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "task,split,n_min,n_max,precision,recall,f1,accuracy,ari,ri"
    assert lines[1] == "hull,test,10,10,0.5,0.25,0.3333333333333333,,,"
    assert lines[2] == "delaunay,val,5,9,1.0,1.0,1.0,0.75,,"
    assert len(lines) == 3


def test_formatted_row_matches_the_file_row() -> None:
    row = MetricsRow("partition", "test", 4, 8, 0.9, 0.8, 0.85, ari=0.7, ri=0.95)
    assert format_metrics_row(row) == "partition,test,4,8,0.9,0.8,0.85,,0.7,0.95"


def test_train_log_has_one_row_per_epoch(tmp_path: Path) -> None:
    path = tmp_path / "train_log.csv"
    write_train_log(path, [EpochLogRow(0, 1.5, 0.75, 0.0, 2.0), EpochLogRow(1, 1.25, 0.5, 0.5, 1.0)])

    assert path.read_text(encoding="utf-8").splitlines() == [
        "epoch,wall_seconds,mean_loss,val_f1,max_grad_norm",
        "0,1.5,0.75,0.0,2.0",
        "1,1.25,0.5,0.5,1.0",
    ]


def test_experiment_table_starts_with_a_comment(tmp_path: Path) -> None:
    path = tmp_path / "higher_order.csv"
    write_table(path, ("epoch", "test_f1"), [(0, None), ("test", 0.5)], comment="scale=0.1 seed=0")

    assert path.read_text(encoding="utf-8").splitlines() == ["# scale=0.1 seed=0", "epoch,test_f1", "0,", "test,0.5"]
