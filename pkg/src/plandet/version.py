"""Version information.

The version string is read by hatchling at build time ([tool.hatch.version] in
pyproject.toml) and printed by 'plandet version'.
"""

from __future__ import annotations

__version__ = "0.1.0"
