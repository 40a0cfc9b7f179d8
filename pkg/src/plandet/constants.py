"""Application-wide constants and default values.

Defines the numerical defaults shared by the determinant engines, the probability
layer and the CLI, plus the UI symbols used for console messages.

Constants:
    DEFAULT_FFT_RESOLUTION: Grid size for FFT coefficient extraction
    MAX_FFT_RESOLUTION: Upper limit when the resolution is doubled on demand
    ZERO_ON_CIRCLE_TOL: Smallest |φ| accepted at a grid node
    WINDING_CONFIDENCE: Largest accepted phase residual for winding numbers
    CIRCLE_START_POINTS / CIRCLE_MAX_POINTS: Nyström grid doubling schedule
    LATTICE_CAP: Largest lattice window used by truncated kernels
    CONTOUR_NODES: Trapezoid nodes per Cauchy contour
    STATUS_SYMBOLS: Unicode symbols for console status messages

Numerical Conventions:
    Tolerances are absolute unless noted otherwise. Residuals of identity checks
    are relative with a floor of 1 (see identities.relative_residual).
"""

from __future__ import annotations

import math

# Symbol coefficient extraction
DEFAULT_FFT_RESOLUTION = 4096
MAX_FFT_RESOLUTION = 2**20
ZERO_ON_CIRCLE_TOL = 1e-12
WINDING_CONFIDENCE = 0.1 * 2 * math.pi
# FFT coefficients below NOISE_FACTOR * eps * sup|φ| are rounding noise.
COEFFICIENT_NOISE_FACTOR = 64.0

# Circle-side Nyström engine
CIRCLE_START_POINTS = 32
CIRCLE_MAX_POINTS = 512

DIAGONAL_TOL = 1e-8
UNIT_CIRCLE_TOL = 1e-12
# Relative size below which kernel coefficients no longer set the grid size.
GRID_BANDWIDTH_TOL = 1e-8

# Lattice-side engine
LATTICE_CAP = 600
MIN_LATTICE_CAP = 16

# Identity checks
DEFAULT_TOL = 1e-8
MIN_TOL = 1e-14
MAX_TOL = 1e-2
SINGULAR_MARGIN = 1e-3

# Cauchy contours
CONTOUR_NODES = 32
ROW_CONTOUR_RADIUS = 0.5
JOINT_CONTOUR_RADIUS = 0.5
LAMBDA2_CONTOUR_RADIUS = 0.25

# Probability layer
PMF_CLAMP = 1e-14
MASS_TOL = 1e-8
UNDERFLOW_TAIL = 1e-15
MAX_ROW_INDEX = 5
MAX_JOINT_ROWS = 3

# Oracle
MAX_ENUMERATION_N = 40
MAX_EXACT_N = 20
POISSON_TAIL_TARGET = 1e-15
COLORED_PAIR_CUTOFF = 1e-16

# Output
OUTPUT_FORMATS: list[str] = ["json", "csv"]

# Environment variables
ENV_CONFIG = "PLANDET_CONFIG"
ENV_THREADS = "PLANDET_THREADS"

# Status symbols for consistent console messages.
STATUS_SYMBOLS = {
    "ok": "✔",
    "warn": "⚠",
    "error": "❌",
    "info": "ℹ",
}
