"""Console output utilities for user-facing messages.

Provides consistent, styled diagnostics for the CLI using Rich formatting. All
messages go to stderr so that stdout stays reserved for machine-readable output
(JSON lines, CSV).

Message Functions:
    print_ok: Success/confirmation messages (green with ✔)
    print_warn: Warning messages (yellow with ⚠)
    print_info: Informational messages (cyan with ℹ)
    print_and_raise: Error messages that exit (red with ❌)

Console Instance:
    Shared Rich console instance bound to stderr, used throughout the application
    for consistent styling and output.

Error Handling Strategy:
    Library code raises PlandetError subclasses. CLI commands catch them and use
    print_and_raise() to convert them to user-friendly messages instead of showing
    Python tracebacks.

    Pattern:
        try:
            # operation that might fail
        except PlandetError as e:
            print_and_raise("User-friendly message", raise_from=e, code=2)

    Exit codes:
        0: success, every identity passed
        1: at least one identity failed
        2: configuration or input error

Examples:
    >>> print_ok("All 42 identity checks passed")
    ✔  All 42 identity checks passed

    >>> print_and_raise("Invalid symbol descriptor", code=2)
    ❌ Invalid symbol descriptor
    # Exits with code 2
"""

from __future__ import annotations

from typing import NoReturn

import typer
from rich.console import Console

from ..constants import STATUS_SYMBOLS

# Option to add to all CLI commands that should be able to suppress progress bars
plain_option = typer.Option(
    False, "--plain", "-p", help="Suppress progress display for scripting."
)

# Shared console instance for the project
console = Console(stderr=True)


def print_ok(msg: str):
    """Print confirmation message.

    Args:
        msg (str): Confirmation message.
    """
    console.print(f"{STATUS_SYMBOLS['ok']}  {msg}", style="green")


def print_warn(msg: str):
    """Print warning message.

    Args:
        msg (str): Warning message.
    """
    console.print(f"{STATUS_SYMBOLS['warn']}  {msg}", style="yellow")


def print_and_raise(
    msg: str, raise_from: Exception | None = None, code: int = 1
) -> NoReturn:
    """Print error message and exit.

    Args:
        msg (str): Error message.
        raise_from (Exception | None, optional): Caught exception to raise from.
            Defaults to None.
        code (int, optional): Exit code. Defaults to 1.
    """
    console.print(f"{STATUS_SYMBOLS['error']} {msg}", style="red")

    raise typer.Exit(code) from raise_from


def print_info(msg: str):
    """Print info message.

    Args:
        msg (str): Info message.
    """
    console.print(f"{STATUS_SYMBOLS['info']}  {msg}", style="bright_cyan")
