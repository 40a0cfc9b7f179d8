"""Finite matrices for the circle and lattice operators.

Circle side:
    K_n is the integral operator on the unit circle with kernel

        K_n(z, w) = (1 - z^n φ(z) w^{-n} φ(w)^{-1}) / (2πi (z - w))

    and diagonal limit -(n/z + φ′(z)/φ(z)) / (2πi). It is discretized by the
    trapezoid rule (Nyström): M[a, b] = K_n(z_a, z_b)·weight_b.

Lattice side:
    S(i, j) = Σ_{k≥1} (φ⁻¹)_{i+k} φ_{-j-k}   (window [n, n+L))
    R(i, j) = Σ_{k≤0} (φ⁻¹)_{i+k} φ_{-j-k}   (window [n-L, n-1])

    Both are products A·B with A[i, k] = (φ⁻¹)_{i+k} and B[k, j] = φ_{-j-k}, so a
    window is one matrix product over the k range that can reach the
    coefficient support. The window size comes from the Hilbert-Schmidt norms of
    the discarded rows of A and columns of B.

Colored kernels S^(m), R^(m) use the dilated symbol z ↦ φ(z^m) on the lattice,
whose coefficients vanish off multiples of m. This yields the block rule
S^(m)(a, b) = δ_{a≡b (m)} S(⌊a/m⌋, ⌊b/m⌋) without building blocks.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg

from ..constants import DIAGONAL_TOL, LATTICE_CAP, UNIT_CIRCLE_TOL
from .errors import LengthMismatch, NoConvergence
from .symbol import Symbol, circle_nodes, dilated

Side = Literal["S", "R"]


@dataclass(frozen=True)
class QuadratureGrid:
    """Trapezoid rule for ∮_{|w|=1} f(w) dw.

    Attributes:
        m_points: Number of nodes.
        nodes: z_j = e^{2πij/m}.
        weights: 2πi·z_j/m.
    """

    m_points: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @classmethod
    def trapezoid(cls, m_points: int) -> QuadratureGrid:
        nodes = circle_nodes(m_points)
        return cls(m_points, nodes, 2j * np.pi * nodes / m_points)


@dataclass(frozen=True)
class ToeplitzMatrix:
    """Finite Toeplitz matrix T_n with (p, q) entry c_{p-q}."""

    n: int
    entries: np.ndarray = field(repr=False)


def _on_circle(point: complex) -> bool:
    return abs(abs(point) - 1.0) <= UNIT_CIRCLE_TOL


def k_kernel_value(sym: Symbol, n: int, z: complex, w: complex) -> complex:
    """Evaluate the kernel of K_n at (z, w) on the unit circle.

    Raises:
        ValueError: If z or w is off the unit circle.
    """
    if not (_on_circle(z) and _on_circle(w)):
        raise ValueError(f"Kernel points must lie on the unit circle, got {z}, {w}.")

    if abs(z - w) < DIAGONAL_TOL:
        log_derivative = complex(sym.log_derivative(z))
        return -(n / z + log_derivative) / (2j * math.pi)

    phi_z = complex(sym.evaluate(z))
    phi_w = complex(sym.evaluate(w))
    ratio = z**n * phi_z / (w**n * phi_w)

    return (1 - ratio) / (2j * math.pi * (z - w))


def k_kernel_matrix(sym: Symbol, n: int, nodes: np.ndarray) -> np.ndarray:
    """Kernel values K_n(z_a, z_b) on a set of distinct circle nodes."""
    twisted = nodes**n * sym.evaluate(nodes)
    difference = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(difference, 1.0)
    kernel = (1 - twisted[:, None] / twisted[None, :]) / (2j * math.pi * difference)
    diagonal = -(n / nodes + sym.log_derivative(nodes)) / (2j * math.pi)
    np.fill_diagonal(kernel, diagonal)

    return kernel


def nystrom_matrix(sym: Symbol, n: int, grid: QuadratureGrid) -> np.ndarray:
    """Nyström discretization M[a, b] = K_n(z_a, z_b)·weight_b.

    det(I - s·M) converges geometrically in grid.m_points to det(1 - sK_n) for
    analytic symbols.
    """
    return k_kernel_matrix(sym, n, grid.nodes) * grid.weights[None, :]


def multi_kernel_matrix(
    sym: Symbol,
    breakpoints: Sequence[int],
    weights: Sequence[complex],
    grid: QuadratureGrid,
) -> np.ndarray:
    """Nyström matrix of Σ_j (s_j - s_{j-1}) K_{n_j} with s_0 = 0.

    Raises:
        LengthMismatch: If breakpoints and weights differ in length.
    """
    if len(breakpoints) != len(weights):
        raise LengthMismatch(
            f"Got {len(breakpoints)} breakpoints but {len(weights)} weights."
        )

    matrix = np.zeros((grid.m_points, grid.m_points), dtype=complex)
    previous: complex = 0

    for n_j, s_j in zip(breakpoints, weights):
        step = s_j - previous
        previous = s_j

        if step != 0:
            matrix += step * nystrom_matrix(sym, n_j, grid)

    return matrix


def toeplitz(sym: Symbol, n: int) -> ToeplitzMatrix:
    """Toeplitz matrix T_n = (φ_{p-q})_{p,q<n}."""
    if n < 0:
        raise ValueError(f"Toeplitz size must be nonnegative, got {n}.")

    orders = np.arange(n)
    column = sym.coefficients("direct", orders)
    row = sym.coefficients("direct", -orders)

    return ToeplitzMatrix(n, scipy.linalg.toeplitz(column, row))


@dataclass(frozen=True)
class DiscreteKernel:
    """Lattice kernel S or R of a symbol, optionally m-colored.

    Attributes:
        side: 'S' (sum over k ≥ 1) or 'R' (sum over k ≤ 0).
        symbol: Base symbol φ.
        m: Color count; m > 1 builds the kernel of z ↦ φ(z^m).
        lattice_symbol: Symbol whose coefficients enter the sums.
    """

    side: Side
    symbol: Symbol
    m: int = 1
    lattice_symbol: Symbol = field(init=False, repr=False)

    def __post_init__(self):
        if self.side not in ("S", "R"):
            raise ValueError(f"side must be 'S' or 'R', got {self.side!r}.")

        if self.m < 1:
            raise ValueError(f"Color count must be positive, got {self.m}.")

        object.__setattr__(self, "lattice_symbol", dilated(self.symbol, self.m))

    def cutoff(self, n: int) -> int:
        """Number of k terms that can contribute for rows/columns in the window."""
        support = self.lattice_symbol.support

        if self.side == "S":
            return max(0, support - n)

        return max(0, support + n - 1)

    def _k_range(self, n: int) -> np.ndarray:
        cutoff = self.cutoff(n)

        if self.side == "S":
            return np.arange(1, cutoff + 1)

        return -np.arange(0, cutoff + 1)

    def indices(self, n: int, size: int) -> np.ndarray:
        """Absolute lattice indices of a window of the given size."""
        if self.side == "S":
            return np.arange(n, n + size)

        return np.arange(n - size, n)

    def factors(self, rows: np.ndarray, cols: np.ndarray, n: int):
        """Factors A, B with kernel[rows, cols] = A @ B."""
        k = self._k_range(n)
        a = self.lattice_symbol.coefficients("inverse", rows[:, None] + k[None, :])
        b = self.lattice_symbol.coefficients("direct", -cols[None, :] - k[:, None])
        return a, b

    def block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Kernel entries for arbitrary absolute row and column indices."""
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        anchor = (
            int(min(rows.min(initial=0), cols.min(initial=0)))
            if self.side == "S"
            else int(max(rows.max(initial=0), cols.max(initial=0))) + 1
        )
        a, b = self.factors(rows, cols, anchor)
        return a @ b

    def window(self, n: int, size: int) -> np.ndarray:
        """The truncated operator χ S χ on [n, n+size) (or R on [n-size, n-1])."""
        idx = self.indices(n, size)
        a, b = self.factors(idx, idx, n)
        return a @ b

    def _hs_tail(self, which: str, boundary: int) -> float:
        # Squared HS norm of the rows of A (which='inverse') or columns of B
        # (which='direct') lying beyond the boundary.
        table = self.lattice_symbol.cached_coeffs
        half = table.half
        l_values = np.arange(-half, half + 1)

        if which == "inverse":
            magnitude = np.abs(table.inverse) ** 2
        else:
            magnitude = np.abs(table.direct[::-1]) ** 2  # |φ_{-l}|² at l

        if self.side == "S":
            multiplicity = l_values - boundary
        else:
            multiplicity = boundary - l_values

        return float(np.sum(np.clip(multiplicity, 0, None) * magnitude))

    def tail_bound(self, n: int, size: int, weight_max: float = 1.0) -> float:
        """Trace-norm estimate of the part of the operator outside the window."""
        edge = n + size if self.side == "S" else n - size
        a_full = math.sqrt(self._hs_tail("inverse", n))
        b_full = math.sqrt(self._hs_tail("direct", n))
        a_out = math.sqrt(self._hs_tail("inverse", edge))
        b_out = math.sqrt(self._hs_tail("direct", edge))

        return weight_max * (a_out * b_full + a_full * b_out)

    def window_size(
        self, n: int, tol: float, weight_max: float = 1.0, cap: int = LATTICE_CAP
    ) -> int:
        """Smallest window size whose tail bound drops below tol.

        Raises:
            NoConvergence: If the bound stays above tol up to cap.
        """
        for size in range(cap + 1):
            if self.tail_bound(n, size, weight_max) < tol:
                return size

        raise NoConvergence(
            f"Lattice tail of {self.side}_{n} stays above {tol:g} for windows up to "
            f"{cap}."
        )


def s_entry(kern: DiscreteKernel, i: int, j: int) -> complex:
    """Single kernel entry S(i, j), R(i, j) or their colored variants."""
    return complex(kern.block(np.array([i]), np.array([j]))[0, 0])


def lattice_factors(
    kern: DiscreteKernel, n: int, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """Factors A, B of the truncated window, window = A @ B."""
    idx = kern.indices(n, size)
    return kern.factors(idx, idx, n)


@dataclass(frozen=True)
class BlockResidual:
    """Deviation of a colored kernel from its block rule.

    Attributes:
        off_block: Largest |S^(m)(a, b)| with a ≢ b (mod m); exactly 0 if the rule
            holds.
        on_block: Largest |S^(m)(a, b) - S(⌊a/m⌋, ⌊b/m⌋)| with a ≡ b (mod m). Only
            summation order differs, so this is rounding-sized.
    """

    off_block: float
    on_block: float


def colored_block_residual(
    colored: DiscreteKernel, probes: Sequence[tuple[int, int]]
) -> BlockResidual:
    """Check S^(m)(a, b) = δ_{a≡b (m)} S(⌊a/m⌋, ⌊b/m⌋) on the probe pairs."""
    base = DiscreteKernel(colored.side, colored.symbol)
    m = colored.m
    off_block = 0.0
    on_block = 0.0

    for a, b in probes:
        value = s_entry(colored, a, b)

        if (a - b) % m:
            off_block = max(off_block, abs(value))
        else:
            on_block = max(on_block, abs(value - s_entry(base, a // m, b // m)))

    return BlockResidual(off_block, on_block)
