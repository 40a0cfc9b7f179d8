"""Registry of the run settings a configuration file may hold.

Each SettingSpec says how a string typed after `plandet config set` becomes a
TOML value (normalize), how that value is read back (from_toml), how it is shown
(display) and which range it must lie in (validate_all). All settings are
scalars, so the only actions are "set" and "reset" (back to the default).

The registry: tol, threads, output, fft_resolution, lattice_cap.

Examples:
    >>> cfg = get_raw_config(path)
    >>> _apply_action(cfg, "tol", "set", ["1e-10"])
    Set tol to '1e-10'.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

from tomlkit import TOMLDocument

from ..constants import DEFAULT_FFT_RESOLUTION, DEFAULT_TOL, LATTICE_CAP, OUTPUT_FORMATS
from .console import print_and_raise, print_ok
from .normalizers import normalize_float_str, normalize_int_str, normalize_output_format
from .validation import (
    validate_fft_resolution,
    validate_lattice_cap,
    validate_positive_int,
    validate_tol,
)

Action = Literal["set", "reset"]


@dataclass
class SettingSpec:
    """How one setting is parsed, stored, shown and checked.

    Attributes:
        key: TOML key.
        value_type: Type returned by from_toml, shown in the settings table.
        actions: Supported actions.
        default: Value written by `plandet config init` and used without a file.
        allowed_values: Closed set of values, or None for a range check only.
        normalize: Command-line string to TOML value.
        from_toml: TOML value to typed value.
        display: Typed value to text.
        validate_all: Function validating the final value before it is applied.
            Should exit via print_and_raise if validation fails, preventing the
            change.
        help: Written as comment above the key and shown by `config settings`.
    """

    key: str
    value_type: type
    actions: set[Action]
    default: Any
    allowed_values: list[Any] | None = None
    normalize: Callable[[str], Any] = lambda value: value
    from_toml: Callable[[Any], Any] = lambda value: value
    display: Callable[[Any], str] = lambda value: str(value)
    validate_all: Callable[[Any], Any] = lambda value: None
    help: str = ""


def _int_spec(
    key: str, default: int, validate: Callable[[int], Any], help: str
) -> SettingSpec:
    return SettingSpec(
        key=key,
        value_type=int,
        actions={"set", "reset"},
        default=default,
        normalize=normalize_int_str,
        from_toml=int,
        validate_all=validate,
        help=help,
    )


SETTINGS: dict[str, SettingSpec] = {
    "tol": SettingSpec(
        key="tol",
        value_type=float,
        actions={"set", "reset"},
        default=DEFAULT_TOL,
        normalize=normalize_float_str,
        from_toml=float,
        display=lambda value: f"{float(value):g}",
        validate_all=validate_tol,
        help="Default tolerance for identity checks and truncations, in [1e-14, 1e-2].",
    ),
    "threads": _int_spec(
        "threads",
        1,
        lambda value: validate_positive_int(value, "threads"),
        "Worker threads for parameter sweeps. Overridden by PLANDET_THREADS.",
    ),
    "output": SettingSpec(
        key="output",
        value_type=str,
        actions={"set", "reset"},
        default="json",
        allowed_values=OUTPUT_FORMATS,
        normalize=normalize_output_format,
        help="Default output format for tables: 'json' (JSON lines) or 'csv'.",
    ),
    "fft_resolution": _int_spec(
        "fft_resolution",
        DEFAULT_FFT_RESOLUTION,
        validate_fft_resolution,
        (
            "FFT grid size for symbol coefficients. Doubled on demand when the "
            "coefficients are not resolved."
        ),
    ),
    "lattice_cap": _int_spec(
        "lattice_cap",
        LATTICE_CAP,
        validate_lattice_cap,
        (
            "Largest lattice window for Plancherel tables, moments and tail probes. "
            f"At most {LATTICE_CAP}."
        ),
    ),
}


def validate_allowed_value(value: Any, spec: SettingSpec) -> None:
    """Exit with code 2 unless value is one of spec.allowed_values (if any)."""
    if spec.allowed_values is None:
        return

    if value not in spec.allowed_values:
        choices = ", ".join(repr(choice) for choice in spec.allowed_values)
        print_and_raise(
            f"Invalid value {value!r} for {spec.key}. Allowed values: {choices}.",
            code=2,
        )


def _apply_action(
    raw_cfg: TOMLDocument, key: str, action: Action, values: list[str] | None
) -> None:
    """Set or reset key in raw_cfg (in-place); invalid input exits with code 2."""
    if key not in SETTINGS:
        print_and_raise(
            f"Unknown configuration key: {key}. Available keys: {list(SETTINGS)}",
            code=2,
        )

    spec = SETTINGS[key]

    if action not in spec.actions:
        print_and_raise(f"Action {action} not supported for {key}.", code=2)

    if action == "reset":
        raw_cfg[key] = spec.default
        print_ok(f"Reset {key} to '{spec.display(spec.default)}'.")
        return

    if values is None or len(values) != 1:
        print_and_raise(
            f"Setting {key} requires a single value for set, got: {values}.", code=2
        )

    new_value = spec.normalize(values[0])
    validate_allowed_value(new_value, spec)
    spec.validate_all(new_value)
    raw_cfg[key] = new_value
    print_ok(f"Set {key} to '{spec.display(new_value)}'.")


def apply_action(path: Path, key: str, action: Action, values: list[str] | None):
    """Apply action to key in the file at path and write the file back.

    Args:
        path (Path): Configuration file.
        key (str): Setting name.
        action (Action): "set" or "reset".
        values (list[str] | None): The new value for "set", None for "reset".
    """
    from .config import get_raw_config, write_config

    raw_cfg = get_raw_config(path)
    _apply_action(raw_cfg, key, action, values)
    write_config(raw_cfg, path)
