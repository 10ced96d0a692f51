from __future__ import annotations

import json
import logging

import pytest

from hypergraph_refiner.config import configure_logging, get_logger


def test_events_are_json_lines_on_stderr(capsys: pytest.CaptureFixture[str]) -> None:
    configure_logging(log_level="INFO")
    log = get_logger(__name__)
    log.info("dataset_written", records=3)
    log.debug("not_shown")

    captured = capsys.readouterr()
    assert captured.out == ""
    (line,) = captured.err.splitlines()
    event = json.loads(line)
    assert (event["event"], event["records"], event["level"]) == ("dataset_written", 3, "info")
    assert "timestamp" in event


def test_stdlib_root_logger_is_left_alone(monkeypatch: pytest.MonkeyPatch) -> None:
    root = logging.getLogger()
    monkeypatch.setattr(root, "handlers", [])
    configure_logging(log_level="DEBUG")
    assert root.handlers == []
