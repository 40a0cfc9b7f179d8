import pytest
import tomlkit
import typer

from plandet.utils.config import (
    Configuration,
    get_default_config,
    get_raw_config,
    list_settings,
    migrate_config,
    write_config,
)
from plandet.utils.errors import ConfigError
from plandet.utils.settings import SETTINGS, _apply_action, apply_action


def test_default_config_holds_every_setting():
    cfg = get_default_config()
    assert set(cfg.keys()) == set(SETTINGS)
    assert cfg["tol"] == 1e-8
    assert cfg["output"] == "json"


def test_configuration_from_default():
    config = Configuration.from_default()
    assert config.tol == 1e-8
    assert config["threads"] == 1
    assert config.lattice_cap == 600
    assert config.fft_resolution == 4096
    assert "tol=1e-08" in repr(config)


def test_configuration_from_explicit_file(config_path):
    config = Configuration.from_config(config_path)
    assert config.output == "json"


def test_configuration_from_environment(config_path, monkeypatch):
    apply_action(config_path, "threads", "set", ["4"])
    monkeypatch.setenv("PLANDET_CONFIG", str(config_path))
    assert Configuration.from_config().threads == 4


def test_configuration_without_file_uses_defaults():
    assert Configuration.from_config(None).tol == 1e-8


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="doesn't exist"):
        get_raw_config(tmp_path / "missing.toml")


def test_invalid_toml(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("tol = = 3\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid TOML"):
        get_raw_config(path)


def test_migration_adds_missing_and_drops_unknown(tmp_path):
    path = tmp_path / "old.toml"
    path.write_text('tol = 1e-10\nsearch_paths = ["/media"]\n', encoding="utf-8")
    cfg = get_raw_config(path)
    assert cfg["tol"] == 1e-10
    assert "search_paths" not in cfg
    assert set(cfg.keys()) == set(SETTINGS)
    assert "search_paths" in path.read_text(encoding="utf-8")


def test_migrate_config_reports_changes():
    cfg = get_default_config()
    assert migrate_config(cfg) is False
    cfg.remove("threads")
    assert migrate_config(cfg) is True
    assert cfg["threads"] == 1


def test_write_config_round_trip(tmp_path):
    path = tmp_path / "nested" / "plandet.toml"
    cfg = get_default_config()
    cfg["output"] = "csv"
    write_config(cfg, path)
    assert tomlkit.parse(path.read_text(encoding="utf-8"))["output"] == "csv"


def test_invalid_value_in_file_exits(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text('output = "xml"\n', encoding="utf-8")
    with pytest.raises(typer.Exit) as exc:
        Configuration.from_config(path)
    assert exc.value.exit_code == 2


def test_apply_action_set_and_reset(config_path):
    apply_action(config_path, "tol", "set", ["1e-10"])
    assert get_raw_config(config_path)["tol"] == 1e-10
    apply_action(config_path, "tol", "reset", None)
    assert tomlkit.parse(config_path.read_text(encoding="utf-8"))["tol"] == 1e-8


@pytest.mark.parametrize(
    ("key", "values"),
    [
        ("unknown", ["1"]),
        ("tol", ["1"]),
        ("tol", ["abc"]),
        ("threads", ["0"]),
        ("output", ["xml"]),
        ("fft_resolution", ["100"]),
        ("lattice_cap", ["8"]),
        ("lattice_cap", ["601"]),
        ("tol", None),
        ("tol", ["1e-8", "1e-9"]),
    ],
)
def test_apply_action_rejects_invalid_input(key, values):
    cfg = get_default_config()
    with pytest.raises(typer.Exit) as exc:
        _apply_action(cfg, key, "set", values)
    assert exc.value.exit_code == 2


def test_list_settings_mentions_every_key(capsys):
    list_settings()
    captured = capsys.readouterr()
    for key in SETTINGS:
        assert key in captured.err
