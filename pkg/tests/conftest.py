from __future__ import annotations

from pathlib import Path

import pytest

from plandet.utils.config import write_default_config

# --- Fixtures for test isolation ---


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch):
    """Make sure no test picks up a configuration from the environment.

    Clears the per-process configuration cache and unsets PLANDET_CONFIG and
    PLANDET_THREADS, so every test starts from registry defaults unless it
    passes a configuration file explicitly.
    """
    import plandet.utils.config

    plandet.utils.config._configs.clear()
    monkeypatch.delenv("PLANDET_CONFIG", raising=False)
    monkeypatch.delenv("PLANDET_THREADS", raising=False)
    yield
    plandet.utils.config._configs.clear()


@pytest.fixture
def config_path(tmp_path) -> Path:
    """Return path to a freshly written default configuration file."""
    path = tmp_path / "plandet.toml"
    write_default_config(path)
    return path
