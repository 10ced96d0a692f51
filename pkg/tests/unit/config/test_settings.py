from __future__ import annotations

from pathlib import Path

import pytest
from pydantic import ValidationError

from hypergraph_refiner.config import Settings


def test_environment_overrides_defaults(data_dir: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("LOG_LEVEL", " debug ")
    monkeypatch.setenv("HSET_THREADS", "3")
    settings = Settings()

    assert settings.data_dir == data_dir
    assert settings.log_level == "DEBUG"
    assert settings.threads == 3


def test_relative_paths_resolve_against_the_data_dir(data_dir: Path, tmp_path: Path) -> None:
    settings = Settings()
    assert settings.resolve("runs/a") == data_dir / "runs" / "a"
    assert settings.resolve(tmp_path / "abs") == tmp_path / "abs"


def test_dotenv_is_read_from_the_working_directory(data_dir: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("LOG_LEVEL")
    Path(".env").write_text("LOG_LEVEL=error\n", encoding="utf-8")
    assert Settings().log_level == "ERROR"


@pytest.mark.parametrize(("name", "value"), [("LOG_LEVEL", "LOUD"), ("HSET_THREADS", "0")])
def test_invalid_values_are_rejected(data_dir: Path, monkeypatch: pytest.MonkeyPatch, name: str, value: str) -> None:
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        Settings()
