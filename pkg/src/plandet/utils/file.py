"""File helpers.

Configuration files are never discovered implicitly: a path is used only when it
is passed explicitly (--config) or through the PLANDET_CONFIG environment
variable. Output files are always explicit --out flags.
"""

from __future__ import annotations

import os
from io import TextIOWrapper
from pathlib import Path
from typing import Literal

from ..constants import ENV_CONFIG


def open_utf8(
    file: str | Path, mode: Literal["r", "w", "a"] = "r", **kwargs
) -> TextIOWrapper:
    """Open a text file with utf-8 encoding.

    Args:
        file (str | Path): File to open.
        mode (Literal["r", "w", "a"], optional): File mode. Defaults to "r".
        kwargs: Additional keyword arguments passed on to open().

    Returns:
        TextIOWrapper: Opened file.
    """
    return open(file, mode, encoding="utf-8", **kwargs)


def resolve_config_file(path: str | Path | None = None) -> Path | None:
    """Return the configuration file to use, if any.

    Args:
        path (str | Path | None, optional): Explicit path from the command line.
            Defaults to None.

    Returns:
        Path | None: Explicit path, else the path from PLANDET_CONFIG, else None.
    """
    if path is not None and str(path) != "":
        return Path(path).expanduser()

    env_path = os.environ.get(ENV_CONFIG)

    if env_path:
        return Path(env_path).expanduser()

    return None
