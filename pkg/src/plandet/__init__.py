"""Fredholm determinant identities and Plancherel row statistics."""

from .cli_main import app_plandet
from .version import __version__

__all__ = [
    "__version__",
    "app_plandet",
    "main",
]


def main():
    """Main entry point for the plandet CLI application.

    This function is called when the package is executed as a script
    or via the installed console scripts 'plandet' or 'plancherel-det'.
    """
    app_plandet()
