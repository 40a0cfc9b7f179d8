"""Run settings stored in TOML files.

get_raw_config(path) returns the tomlkit document of a file, comments included,
for commands that edit and write it back. Configuration.from_config(path) turns
that document into typed, validated values for the numerical commands, or falls
back to registry defaults when no file is named.

File Selection:
    There is no implicit discovery. A file is read only when it is passed as
    --config PATH or named by the PLANDET_CONFIG environment variable (see
    file.resolve_config_file). Without either, Configuration.from_default() is
    used.

Caching:
    Parsed documents are cached per path for the lifetime of the process.

Error Handling:
    - Missing config file: ConfigError (create one with 'plandet config init')
    - Corrupted config: ConfigError; the file is left untouched
    - Missing settings: Added in memory from registry defaults with an info message
    - Unknown settings: Dropped in memory with an info message

Example:
    >>> config = Configuration.from_config(Path("plandet.toml"))
    >>> config.tol
    1e-08
    >>> config["threads"]
    1
"""

from __future__ import annotations

from pathlib import Path
from textwrap import wrap
from typing import Any

import tomlkit
from rich.panel import Panel
from rich.table import Column, Table
from tomlkit import TOMLDocument, comment, document, nl
from tomlkit.exceptions import ParseError, TOMLKitError

from .console import console, print_info, print_ok
from .errors import ConfigError
from .file import open_utf8, resolve_config_file
from .settings import SETTINGS, SettingSpec, validate_allowed_value

_configs: dict[Path, TOMLDocument] = {}


def _read_config(path: Path) -> TOMLDocument:
    try:
        with open_utf8(path) as f:
            cfg = tomlkit.load(f)
    except FileNotFoundError as e:
        raise ConfigError(
            f"Configuration file '{path}' doesn't exist. "
            "Create one with 'plandet config init PATH'."
        ) from e
    except (TOMLKitError, ParseError) as e:
        raise ConfigError(f"Configuration file '{path}' is not valid TOML: {e}") from e

    migrate_config(cfg)

    return cfg


def get_raw_config(path: Path) -> TOMLDocument:
    """Get the raw configuration stored at path.

    Migrates the loaded configuration in memory by adding missing keys with default
    values and dropping unknown keys. Caches the document on first read and returns
    the cached instance on subsequent calls.

    Args:
        path (Path): Configuration file.

    Raises:
        ConfigError: If the file is missing or not valid TOML.

    Returns:
        TOMLDocument: Parsed configuration.
    """
    path = Path(path)

    if path not in _configs:
        _configs[path] = _read_config(path)

    return _configs[path]


class Configuration:
    """Validated run settings, readable as attributes or by key.

    Examples:
        >>> config = Configuration.from_default()
        >>> config.output
        'json'
        >>> config["lattice_cap"]
        600

    See Also:
        get_raw_config(): The editable document behind a configuration.
    """

    tol: float
    threads: int
    output: str
    fft_resolution: int
    lattice_cap: int

    def __init__(
        self, raw_config: TOMLDocument, settings_registry: dict[str, SettingSpec]
    ):
        """Convert and validate every entry of raw_config.

        Args:
            raw_config (TOMLDocument): Migrated document.
            settings_registry (dict[str, SettingSpec]): Conversion and validation per
                key.

        Raises:
            typer.Exit: With code 2 if a value is out of range.
        """
        self._registry = settings_registry
        self._raw_config = raw_config

        for setting, value in self._raw_config.items():
            spec = self._registry[setting]
            typed = spec.from_toml(value)
            validate_allowed_value(typed, spec)
            spec.validate_all(typed)
            setattr(self, setting, typed)

    def __repr__(self) -> str:  # noqa: D105
        items = [
            f"{key}={getattr(self, key)!r}"
            for key in self._registry
            if hasattr(self, key)
        ]
        return f"Configuration({', '.join(items)})"

    def __getitem__(self, key: str) -> Any:  # noqa: D105
        return getattr(self, key)

    @classmethod
    def from_config(cls, path: str | Path | None = None) -> Configuration:
        """Create Configuration from an explicitly named configuration file.

        Args:
            path (str | Path | None, optional): Explicit file. If None, the file named
                by PLANDET_CONFIG is used; if that is unset too, defaults are used.

        Returns:
            Configuration: Current configuration.
        """
        config_file = resolve_config_file(path)

        if config_file is None:
            return cls.from_default()

        return cls(get_raw_config(config_file), SETTINGS)

    @classmethod
    def from_default(cls) -> Configuration:
        """Registry defaults, no file involved."""
        return cls(get_default_config(), SETTINGS)


def add_default_setting(raw_cfg: TOMLDocument, key: str):
    """Append key with its help text as comment and its default value."""
    spec = SETTINGS[key]

    for line in wrap(spec.help, width=80):
        raw_cfg.add(comment(line))

    raw_cfg.add(key, spec.default)
    raw_cfg.add(nl())


def get_default_config() -> TOMLDocument:
    """Document holding every registry setting at its default."""
    default_cfg = document()

    for setting in SETTINGS:
        add_default_setting(default_cfg, setting)

    return default_cfg


def write_config(raw_cfg: TOMLDocument, path: Path):
    """Write raw_cfg to path, creating parent directories, and refresh the cache."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open_utf8(path, "w") as f:
        tomlkit.dump(raw_cfg, f)

    _configs[path] = raw_cfg


def write_default_config(path: Path) -> TOMLDocument:
    """Write the default document to path and return it."""
    default_cfg = get_default_config()
    write_config(default_cfg, path)
    print_ok(f"Written default configuration to '{path}'.")

    return default_cfg


def migrate_config(raw_cfg: TOMLDocument) -> bool:
    """Add missing settings and drop unknown ones (in-place, in memory only).

    Args:
        raw_cfg (TOMLDocument): Configuration to migrate.

    Returns:
        bool: Whether raw_cfg changed.
    """
    present = set(raw_cfg.keys())
    missing = sorted(set(SETTINGS) - present)
    unknown = sorted(present - set(SETTINGS))

    for key in missing:
        add_default_setting(raw_cfg, key)
        print_info(f"Setting '{key}' not in file, using its default.")

    for key in unknown:
        raw_cfg.remove(key)
        print_info(f"Ignoring unknown setting '{key}'.")

    return bool(missing or unknown)


def list_settings():
    "List all available settings as defined by the settings registry."
    table = Table(
        Column("Setting", style="cyan", no_wrap=True),
        Column("Type", style="magenta", no_wrap=True),
        Column("Default", style="yellow"),
        Column("Actions", style="green"),
        Column("Description", style="white"),
        show_header=True,
        box=None,
        padding=(0, 1),
    )

    for key, spec in SETTINGS.items():
        table.add_row(
            key,
            spec.value_type.__name__,
            spec.display(spec.default),
            ", ".join(sorted(spec.actions)),
            spec.help,
        )

    panel = Panel(
        table,
        title="[bold]Available settings[/bold]",
        title_align="left",
        padding=(1, 1),
    )

    console.print()
    console.print(panel)
