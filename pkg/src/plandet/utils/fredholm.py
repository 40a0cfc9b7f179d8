"""Determinant engines.

Circle engine:
    det(1 - sK_n) is approximated by det(I - s·M) with M the Nyström matrix on m
    trapezoid nodes. The grid doubles until two successive determinants agree.
    The starting grid is large enough to resolve the kernel's bandwidth, because
    an under-resolved grid can agree with its double by accident.

Lattice engine:
    det(1 - w·S_n) is a finite determinant over the truncated window; the window
    grows until the tail bound of DiscreteKernel.window_size() is below tol.

Eigenvalue path:
    For polynomial manipulations in r the window's eigenvalues a_j give
    det(1 - rS_n) = Π(1 - r a_j) exactly. With x = 1 - r the product is
    Π(1 - a_j + a_j x) = Σ p_j x^j, where p_j is the probability of exactly j
    points in the window, and (-d/dr)^j det(1 - rS_n)|_{r=1} = j!·p_j.

Error Estimates:
    error_estimate = (difference of the last two grids, or the lattice tail bound)
    + 16·eps·size·max(1, |value|).
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..constants import (
    CIRCLE_MAX_POINTS,
    CIRCLE_START_POINTS,
    GRID_BANDWIDTH_TOL,
    LATTICE_CAP,
)
from .errors import NonFinite
from .kernels import (
    DiscreteKernel,
    QuadratureGrid,
    lattice_factors,
    multi_kernel_matrix,
    nystrom_matrix,
)
from .symbol import Symbol, winding_number

_EPS = float(np.finfo(float).eps)

Weight = complex | Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DetResult:
    """Determinant with an error estimate.

    Attributes:
        value: Determinant value.
        error_estimate: Absolute error estimate.
        resolution_used: Grid size (circle) or window size (lattice).
        converged: True if error_estimate < requested tolerance.
    """

    value: complex
    error_estimate: float
    resolution_used: int
    converged: bool


def _rounding(size: int, value: complex) -> float:
    return 16 * _EPS * max(size, 1) * max(1.0, abs(value))


def det_dense(matrix: np.ndarray) -> complex:
    """Determinant via LU with partial pivoting.

    Args:
        matrix (np.ndarray): Square matrix.

    Raises:
        NonFinite: If the matrix has NaN or infinite entries.
        ValueError: If the matrix is not square.

    Returns:
        complex: det(matrix); 1 for an empty matrix.
    """
    matrix = np.asarray(matrix, dtype=complex)

    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}.")

    if matrix.size == 0:
        return 1 + 0j

    if not np.all(np.isfinite(matrix)):
        raise NonFinite("Matrix contains NaN or infinite entries.")

    with warnings.catch_warnings():
        # Exactly singular inputs are allowed; their determinant is 0.
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, pivots = scipy.linalg.lu_factor(matrix, check_finite=False)

    swaps = int(np.count_nonzero(pivots != np.arange(pivots.size)))
    sign = -1 if swaps % 2 else 1

    return complex(sign * np.prod(np.diag(lu)))


def circle_start_points(
    sym: Symbol, n: int | Sequence[int], floor: int = CIRCLE_START_POINTS
) -> int:
    """Smallest power of two ≥ floor resolving z^n·φ(z) on the grid."""
    largest_n = max(abs(int(value)) for value in np.atleast_1d(n))
    needed = 2 * (largest_n + sym.bandwidth(GRID_BANDWIDTH_TOL)) + 2
    points = max(floor, 1)

    while points < needed:
        points *= 2

    return points


def fredholm_det_nystrom(
    builder: Callable[[QuadratureGrid], np.ndarray],
    tol: float,
    start_points: int = CIRCLE_START_POINTS,
    max_points: int = CIRCLE_MAX_POINTS,
) -> DetResult:
    """Determinant det(I - builder(grid)) with grid doubling.

    Args:
        builder (Callable[[QuadratureGrid], np.ndarray]): Returns the weighted
            Nyström matrix of the operator for a grid.
        tol (float): Target absolute accuracy.
        start_points (int, optional): First grid size.
        max_points (int, optional): Last grid size.

    Returns:
        DetResult: Best value; converged=False if the budget ran out.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}.")

    points = start_points
    previous: complex | None = None
    estimate = math.inf

    while points <= max_points:
        grid = QuadratureGrid.trapezoid(points)
        value = det_dense(np.eye(points) - builder(grid))

        if previous is not None:
            estimate = abs(value - previous) + _rounding(points, value)

            if estimate < tol:
                return DetResult(value, estimate, points, True)

        previous = value
        points *= 2

    if previous is None:
        raise ValueError(
            f"start_points {start_points} exceeds max_points {max_points}."
        )

    return DetResult(previous, estimate, points // 2, False)


def fredholm_det_circle(
    sym: Symbol,
    n: int,
    s: complex,
    tol: float,
    start_points: int = CIRCLE_START_POINTS,
    max_points: int = CIRCLE_MAX_POINTS,
) -> DetResult:
    """det(1 - sK_n) by Nyström quadrature with grid doubling.

    Args:
        sym (Symbol): Symbol φ.
        n (int): Operator index.
        s (complex): Spectral parameter.
        tol (float): Target absolute accuracy.
        start_points (int, optional): Smallest grid. Raised to resolve the
            bandwidth of z^n φ(z).
        max_points (int, optional): Largest grid.

    Returns:
        DetResult: Determinant and convergence information.
    """
    start = circle_start_points(sym, n, start_points)
    max_points = max(max_points, start)

    return fredholm_det_nystrom(
        lambda grid: s * nystrom_matrix(sym, n, grid), tol, start, max_points
    )


def fredholm_det_multi(
    sym: Symbol,
    breakpoints: Sequence[int],
    weights: Sequence[complex],
    tol: float,
    start_points: int = CIRCLE_START_POINTS,
    max_points: int = CIRCLE_MAX_POINTS,
) -> DetResult:
    """det(1 - Σ_j (s_j - s_{j-1}) K_{n_j}) by Nyström quadrature."""
    start = circle_start_points(sym, list(breakpoints) or [0], start_points)
    max_points = max(max_points, start)

    return fredholm_det_nystrom(
        lambda grid: multi_kernel_matrix(sym, breakpoints, weights, grid),
        tol,
        start,
        max_points,
    )


def _weight_values(weight: Weight, indices: np.ndarray) -> np.ndarray:
    if callable(weight):
        return np.asarray(weight(indices), dtype=complex)

    return np.full(indices.shape, complex(weight))


def lattice_weight_max(kern: DiscreteKernel, n: int, weight: Weight, cap: int) -> float:
    """Largest |weight| on the admissible index range of the kernel."""
    if not callable(weight):
        return abs(complex(weight))

    values = _weight_values(weight, kern.indices(n, cap + 1))
    return float(np.max(np.abs(values), initial=0.0))


def fredholm_det_lattice(
    kern: DiscreteKernel,
    n: int,
    weight: Weight,
    tol: float,
    cap: int = LATTICE_CAP,
) -> DetResult:
    """det(δ_ij - weight(i)·K(i, j)) over the truncated lattice window.

    Args:
        kern (DiscreteKernel): S- or R-side kernel.
        n (int): Window anchor: [n, ∞) for S, (-∞, n-1] for R.
        weight (Weight): Constant or vectorized function of the lattice index.
        tol (float): Target accuracy of the truncation.
        cap (int, optional): Largest window.

    Raises:
        NoConvergence: If the tail bound stays above tol up to cap.

    Returns:
        DetResult: Determinant, error estimate including the tail bound, and the
            window size in resolution_used.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}.")

    weight_max = lattice_weight_max(kern, n, weight, cap)
    size = kern.window_size(n, tol / 100, weight_max, cap)
    idx = kern.indices(n, size)
    window = kern.window(n, size)
    matrix = np.eye(size) - _weight_values(weight, idx)[:, None] * window
    value = det_dense(matrix)
    estimate = kern.tail_bound(n, size, weight_max) + _rounding(size, value)

    return DetResult(value, estimate, size, estimate < tol)


def eig_lattice(kern: DiscreteKernel, n: int, size: int) -> np.ndarray:
    """Eigenvalues of the truncated window of kern.

    Self-adjoint windows S = A·A* use squared singular values of A, which keeps
    tiny eigenvalues accurate; other Hermitian windows use eigvalsh.

    Args:
        kern (DiscreteKernel): Lattice kernel.
        n (int): Window anchor.
        size (int): Window size.

    Returns:
        np.ndarray: Eigenvalues in descending order of magnitude, length size.
    """
    if size > LATTICE_CAP:
        raise ValueError(f"Window size {size} exceeds the cap {LATTICE_CAP}.")

    if size == 0:
        return np.zeros(0)

    a, b = lattice_factors(kern, n, size)

    if np.array_equal(b, a.conj().T):
        values = scipy.linalg.svdvals(a) ** 2 if a.size else np.zeros(0)
        eigs = np.zeros(size)
        eigs[: values.size] = values
        return eigs

    window = a @ b

    if np.array_equal(window, window.conj().T):
        eigs = scipy.linalg.eigvalsh(window)
    else:
        eigs = scipy.linalg.eigvals(window)

    return eigs[np.argsort(-np.abs(eigs), kind="stable")]


def count_distribution(eigs: np.ndarray, kmax: int | None = None) -> np.ndarray:
    """Coefficients p_j of Π(1 - a_i + a_i x).

    For eigenvalues of a determinantal window p_j is the probability of exactly
    j points, and (-d/dr)^j det(1 - rS)|_{r=1} = j!·p_j.

    Args:
        eigs (np.ndarray): Eigenvalues a_i.
        kmax (int | None, optional): Largest j returned. Defaults to all.

    Returns:
        np.ndarray: p_0, …, p_kmax (zero-padded).
    """
    eigs = np.asarray(eigs)
    coefficients = np.ones(1, dtype=eigs.dtype if eigs.size else float)

    for a in eigs:
        coefficients = np.convolve(coefficients, np.array([1 - a, a]))

    if kmax is None:
        return coefficients

    padded = np.zeros(kmax + 1, dtype=coefficients.dtype)
    keep = min(kmax + 1, coefficients.size)
    padded[:keep] = coefficients[:keep]

    return padded


def det_derivatives(eigs: np.ndarray, order: int) -> np.ndarray:
    """(-d/dr)^j det(1 - rS)|_{r=1} for j = 0..order."""
    probabilities = count_distribution(eigs, order)
    factorials = np.array([math.factorial(j) for j in range(order + 1)], dtype=float)

    return factorials * probabilities


@dataclass(frozen=True)
class RootOrderProbe:
    """Vanishing order of det(1 - sK_n) at s = -1.

    Attributes:
        expected_order: n + #(φ), clipped at 0.
        estimated_order: Slope of log|det| against log ε.
        epsilons: Distances ε with s = -1 + ε.
        values: det(1 - sK_n) at those points.
    """

    expected_order: int
    estimated_order: float
    epsilons: tuple[float, ...]
    values: tuple[complex, ...]


def root_order_probe(
    sym: Symbol,
    n: int,
    epsilons: Sequence[float] = (1e-2, 1e-3),
    tol: float = 1e-12,
) -> RootOrderProbe:
    """Estimate the order of the zero of det(1 - sK_n) at s = -1."""
    values = tuple(
        fredholm_det_circle(sym, n, -1 + eps, tol).value for eps in epsilons
    )
    first, last = abs(values[0]), abs(values[-1])
    slope = (
        math.log(first / last) / math.log(epsilons[0] / epsilons[-1])
        if first > 0 and last > 0
        else math.nan
    )

    return RootOrderProbe(
        expected_order=max(0, n + winding_number(sym).winding),
        estimated_order=slope,
        epsilons=tuple(epsilons),
        values=values,
    )


def parity_residual(sym: Symbol, n: int, s: complex, tol: float) -> float:
    """Relative mismatch of det(1-sK_n)/(1+s)^{n+#} and det(1+sK_n)/(1-s)^{n+#}.

    Both quotients equal det(1 - s²S_n).
    """
    exponent = n + winding_number(sym).winding
    plus = fredholm_det_circle(sym, n, s, tol).value / (1 + s) ** exponent
    minus = fredholm_det_circle(sym, n, -s, tol).value / (1 - s) ** exponent

    return abs(plus - minus) / max(1.0, abs(plus), abs(minus))
