"""Validation utilities.

Provides validation functions that make sure user-supplied settings and run
configurations are usable before any numerical work starts.

Validation Strategy:
    - Validates ranges and required fields
    - Exits with code 2 if validation fails (configuration error)
    - Returns the validated value for use in operations
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..constants import (
    LATTICE_CAP,
    MAX_FFT_RESOLUTION,
    MAX_TOL,
    MIN_LATTICE_CAP,
    MIN_TOL,
    OUTPUT_FORMATS,
)
from .console import print_and_raise

if TYPE_CHECKING:
    from .sweep import RunConfig


def validate_tol(tol: float) -> float:
    """Check that a tolerance lies in the supported range.

    Args:
        tol (float): Requested tolerance.

    Raises:
        typer.Exit: If tol is outside [MIN_TOL, MAX_TOL].

    Returns:
        float: The tolerance.
    """
    if not MIN_TOL <= tol <= MAX_TOL:
        print_and_raise(
            f"Tolerance {tol:g} outside supported range [{MIN_TOL:g}, {MAX_TOL:g}].",
            code=2,
        )

    return tol


def validate_positive_int(value: int, name: str = "value") -> int:
    """Check that an integer setting is at least 1.

    Args:
        value (int): Value to check.
        name (str, optional): Setting name used in the message. Defaults to "value".

    Returns:
        int: The value.
    """
    if value < 1:
        print_and_raise(f"{name} must be at least 1, got {value}.", code=2)

    return value


def validate_fft_resolution(resolution: int) -> int:
    """Check that an FFT resolution is a power of two in [64, MAX_FFT_RESOLUTION].

    Args:
        resolution (int): Grid size.

    Returns:
        int: The resolution.
    """
    if (
        resolution < 64
        or resolution > MAX_FFT_RESOLUTION
        or resolution & (resolution - 1) != 0
    ):
        print_and_raise(
            f"fft_resolution must be a power of two in [64, {MAX_FFT_RESOLUTION}], "
            f"got {resolution}.",
            code=2,
        )

    return resolution


def validate_lattice_cap(cap: int) -> int:
    """Check a lattice window cap.

    Args:
        cap (int): Largest window size.

    Returns:
        int: The cap.
    """
    if not MIN_LATTICE_CAP <= cap <= LATTICE_CAP:
        print_and_raise(
            f"lattice_cap must lie in [{MIN_LATTICE_CAP}, {LATTICE_CAP}], got {cap}.",
            code=2,
        )

    return cap


def validate_run_config(run_config: RunConfig) -> RunConfig:
    """Validate a run configuration before a sweep starts.

    Args:
        run_config (RunConfig): Configuration to validate.

    Raises:
        typer.Exit: If the tolerance is out of range, a parameter grid is empty,
            the thread count is not positive or the output format is unknown.

    Returns:
        RunConfig: The validated configuration.
    """
    validate_tol(run_config.tol)
    validate_positive_int(run_config.threads, "threads")

    if run_config.output not in OUTPUT_FORMATS:
        print_and_raise(
            f"Invalid output format '{run_config.output}'. Expected one of: "
            f"{', '.join(OUTPUT_FORMATS)}.",
            code=2,
        )

    for name, grid in run_config.grids.items():
        if len(grid) == 0:
            print_and_raise(f"Parameter grid '{name}' is empty.", code=2)

    return run_config
