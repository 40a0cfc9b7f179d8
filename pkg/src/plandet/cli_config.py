"""Configuration management commands.

Provides a Typer sub-application for managing configuration files through the
CLI. Configuration files are never discovered implicitly: every command works on
the file given with --config or named by PLANDET_CONFIG.

Command Structure:
    plandet config init PATH           # Write a default configuration file
    plandet config file                # Print the resolved file location
    plandet config list                # Display the configuration
    plandet config get <key>           # Get a specific setting value
    plandet config set <key> <value>   # Set a setting
    plandet config reset <key>         # Reset a setting to its default
    plandet config settings            # List all available settings

Features:
    - TOML syntax highlighting for config display
    - Rich table formatting for settings overview
    - Action-based setting modifications delegated to settings registry
"""

from __future__ import annotations

from pathlib import Path

import tomlkit
import typer
from rich.syntax import Syntax
from tomlkit import TOMLDocument

from .constants import ENV_CONFIG
from .utils.config import (
    get_default_config,
    get_raw_config,
    list_settings,
    write_default_config,
)
from .utils.console import console, print_and_raise, print_info
from .utils.errors import ConfigError
from .utils.file import resolve_config_file
from .utils.settings import SETTINGS, apply_action

app_config = typer.Typer(help="Manage plandet configuration files.")

config_option = typer.Option(
    None,
    "--config",
    "-c",
    envvar=ENV_CONFIG,
    help="Configuration file (TOML).",
)


def _require_file(path: Path | None) -> Path:
    config_file = resolve_config_file(path)

    if config_file is None:
        print_and_raise(
            f"No configuration file given. Pass --config PATH or set {ENV_CONFIG}.",
            code=2,
        )

    return config_file


def _load(path: Path) -> TOMLDocument:
    try:
        return get_raw_config(path)
    except ConfigError as e:
        print_and_raise(str(e), raise_from=e, code=2)


@app_config.command()
def init(
    path: Path = typer.Argument(..., help="Where to write the configuration file."),
    force: bool = typer.Option(False, "--force", help="Overwrite an existing file."),
):
    """Write a default configuration file with a comment per setting."""
    if path.exists() and not force:
        print_and_raise(
            f"'{path}' already exists. Use --force to overwrite it.", code=2
        )

    write_default_config(path)


@app_config.command()
def file(config: Path = config_option):
    "Print the configuration file location."
    print(_require_file(config))


@app_config.command(name="list")
def list_config(config: Path = config_option):
    "List the configuration, or the defaults if no file is given."
    config_file = resolve_config_file(config)

    if config_file is None:
        print_info("No configuration file given, showing defaults.")
        raw = get_default_config()
    else:
        console.print(f"Configuration file: {config_file}\n", style="dim")
        raw = _load(config_file)

    console.print(Syntax(code=tomlkit.dumps(raw), lexer="toml", line_numbers=True))


@app_config.command()
def get(key: str, config: Path = config_option):
    """Get a setting."""
    if key not in SETTINGS:
        print_and_raise(
            f"Invalid key: '{key}'. Available keys: "
            f"{', '.join(repr(key) for key in SETTINGS)}",
            code=2,
        )

    config_file = resolve_config_file(config)
    raw = get_default_config() if config_file is None else _load(config_file)
    console.print(f"{key} = {SETTINGS[key].display(raw[key])}")


@app_config.command()
def set(key: str, value: str, config: Path = config_option):
    """Set a setting."""
    config_file = _require_file(config)
    _load(config_file)
    apply_action(config_file, key, "set", [value])


@app_config.command()
def reset(key: str, config: Path = config_option):
    """Reset a setting to its default."""
    config_file = _require_file(config)
    _load(config_file)
    apply_action(config_file, key, "reset", None)


@app_config.command()
def settings():
    """List all available settings."""
    list_settings()
