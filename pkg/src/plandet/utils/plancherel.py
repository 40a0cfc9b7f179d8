"""Row statistics of Poissonized Plancherel measure.

Under Poissonized Plancherel measure with parameter t the points λ_j - j
(j ≥ 1) form a determinantal process on the integers whose correlation kernel is
the lattice kernel S of φ(z) = e^{t(z - 1/z)}. All row statistics are counts of
points in half-lines:

    λ_k ≤ n  ⇔  at most k-1 points in [n-k+1, ∞)

so φ^(k)_n(t) = Prob(λ_k ≤ n) = Σ_{j<k} p_j, where p_j is the probability of
exactly j points in the truncated window of S_{n-k+1}. The p_j come from the
window's eigenvalues (fredholm.count_distribution) and can be cross-checked by a
Cauchy contour of det(1 - rS) around r = 1.

Joint distributions use the bands (a_l, a_{l-1}] (a_0 = ∞): with N_l the number
of points in band l, E[Π u_l^{N_l}] = det(I + diag(u - 1) S), and
λ_l - l ≤ a_l for all l ⇔ Σ_{j≤r} N_j ≤ r - 1 for all r. The probability is the
sum of the Taylor coefficients at u = 0 over that index set, extracted with a
tensor-product contour.

Scaling:
    Poissonized rows use ξ_k = (λ_k - 2t)/t^{1/3}; fixed-N rows use
    (λ_k - 2√N)/N^{1/6}; the colored λ₁ of m colors uses (λ₁ - 2mt)/(m t^{1/3});
    tail probes use x = (n - 2t)·2^{1/3}/n^{1/3}. The lower-tail x is anchored at
    the first-row edge for every k.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

from ..constants import (
    CONTOUR_NODES,
    DEFAULT_TOL,
    JOINT_CONTOUR_RADIUS,
    LAMBDA2_CONTOUR_RADIUS,
    LATTICE_CAP,
    MASS_TOL,
    MAX_JOINT_ROWS,
    MAX_ROW_INDEX,
    PMF_CLAMP,
    ROW_CONTOUR_RADIUS,
    UNDERFLOW_TAIL,
)
from .contour import taylor_coefficients, tensor_taylor_coefficients
from .errors import DisagreementError, OutOfRange, WindowTooSmall
from .fredholm import (
    count_distribution,
    det_dense,
    eig_lattice,
    fredholm_det_circle,
    fredholm_det_lattice,
)
from .identities import IdentityReport, relative_residual
from .kernels import DiscreteKernel
from .symbol import Symbol, bessel

Regime = Literal["upper", "lower", "far"]

# Chunk of contour points whose determinants are computed in one batch.
DET_BATCH = 1024


@dataclass(frozen=True)
class PoissonizedModel:
    """Poissonized Plancherel measure with parameter t (mean size t²).

    Attributes:
        t: Parameter.
        symbol: bessel(t).
        cap: Largest lattice window.
    """

    t: float
    symbol: Symbol = field(repr=False)
    cap: int = LATTICE_CAP

    @classmethod
    def from_t(cls, t: float, cap: int = LATTICE_CAP) -> PoissonizedModel:
        if t < 0:
            raise ValueError(f"t must be nonnegative, got {t}.")
        return cls(t=float(t), symbol=bessel(t), cap=cap)

    @cached_property
    def kernel(self) -> DiscreteKernel:
        return DiscreteKernel("S", self.symbol)

    def window(self, start: int, tol: float) -> tuple[int, np.ndarray]:
        """Size and matrix of the truncated S window starting at start."""
        size = self.kernel.window_size(start, tol / 100, cap=self.cap)
        return size, self.kernel.window(start, size)

    def counts(self, start: int, kmax: int, tol: float) -> np.ndarray:
        """p_0..p_kmax: probabilities of exactly j points in [start, ∞)."""
        size = self.kernel.window_size(start, tol / 100, cap=self.cap)
        eigs = eig_lattice(self.kernel, start, size)
        return np.real(count_distribution(eigs, kmax))


@dataclass(frozen=True)
class ScaledRow:
    """A row length on the fixed-N edge scale.

    Attributes:
        j: Row index.
        raw: λ_j.
        N: Partition size.
        value: (λ_j - 2√N)/N^{1/6}.
    """

    j: int
    raw: int
    N: int
    value: float


def _check_range(value: float, tol: float, what: str) -> float:
    if value < -tol or value > 1 + tol:
        raise OutOfRange(
            f"{what} = {value:.3g} outside [0, 1] beyond tolerance {tol:g}; the "
            "lattice truncation is too coarse."
        )
    return value


def contour_counts(
    window: np.ndarray, kmax: int, nodes: int = CONTOUR_NODES
) -> np.ndarray:
    """p_0..p_kmax from a Cauchy contour of det(1 - rS) around r = 1."""
    identity = np.eye(window.shape[0])
    coefficients = taylor_coefficients(
        lambda r: det_dense(identity - r * window), 1.0, ROW_CONTOUR_RADIUS, nodes
    )
    signs = (-1.0) ** np.arange(kmax + 1)
    return np.real(signs * coefficients[: kmax + 1])


def row_cdf(
    model: PoissonizedModel,
    k: int,
    n: int,
    tol: float = DEFAULT_TOL,
    cross_check: bool = False,
) -> float:
    """φ^(k)_n(t) = Prob(λ_k ≤ n).

    Args:
        model (PoissonizedModel): Measure.
        k (int): Row index, 1 ≤ k ≤ MAX_ROW_INDEX.
        n (int): Threshold.
        tol (float, optional): Tolerance for truncation and range checks.
        cross_check (bool, optional): Also evaluate the count probabilities by a
            Cauchy contour and compare.

    Raises:
        OutOfRange: If the value leaves [0, 1] by more than tol.
        DisagreementError: If the contour cross-check disagrees.

    Returns:
        float: The CDF value.
    """
    if not 1 <= k <= MAX_ROW_INDEX:
        raise ValueError(f"Row index must lie in 1..{MAX_ROW_INDEX}, got {k}.")

    if n < 0:
        return 0.0

    start = n - k + 1
    counts = model.counts(start, k - 1, tol)

    if cross_check:
        _, window = model.window(start, tol)
        by_contour = contour_counts(window, k - 1)
        mismatch = float(np.max(np.abs(by_contour - counts)))

        if mismatch > max(100 * tol, 1e-7):
            raise DisagreementError(
                f"Count probabilities for k={k}, n={n}: eigenvalue and contour paths "
                f"differ by {mismatch:.3g}."
            )

    return _check_range(float(np.sum(counts)), tol, f"φ^({k})_{n}")


def colored_row_cdf(t: float, m: int, n: int, tol: float = DEFAULT_TOL) -> float:
    """Prob(λ_1(π) ≤ n) for m superimposed Poissonized colors: det(1 - S^(m)_n)."""
    if n < 0:
        return 0.0

    kern = DiscreteKernel("S", bessel(t), m)
    value = fredholm_det_lattice(kern, n, 1.0, tol).value.real
    return _check_range(value, tol, f"colored φ_{n}")


def lambda_index_set(k: int) -> list[tuple[int, ...]]:
    """Multi-indices n ∈ {0,1,…}^k with Σ_{j≤r} n_j ≤ r - 1 for every r."""
    indices: list[tuple[int, ...]] = [()]

    for r in range(1, k + 1):
        indices = [
            (*prefix, value)
            for prefix in indices
            for value in range(r - sum(prefix))
        ]

    return indices


@dataclass(frozen=True)
class JointQuery:
    """Thresholds a_1 ≥ … ≥ a_k for Prob(λ_l - l ≤ a_l, l = 1..k).

    Use math.inf for an absent constraint.
    """

    thresholds: tuple[float, ...]

    def __post_init__(self):
        a = self.thresholds

        if not 1 <= len(a) <= MAX_JOINT_ROWS:
            raise ValueError(f"Joint queries support 1..{MAX_JOINT_ROWS} thresholds.")

        if any(later > earlier for earlier, later in zip(a, a[1:])):
            raise ValueError(f"Thresholds must be nonincreasing, got {a}.")

        if math.isinf(a[-1]):
            raise ValueError("The last threshold must be finite.")

    @property
    def k(self) -> int:
        return len(self.thresholds)


def joint_cdf(
    model: PoissonizedModel, query: JointQuery, tol: float = DEFAULT_TOL
) -> float:
    """Prob(λ_1 - 1 ≤ a_1, …, λ_k - k ≤ a_k).

    Raises:
        OutOfRange: If the value leaves [0, 1] by more than tol.
    """
    k = query.k
    start = int(query.thresholds[-1]) + 1
    size, window = model.window(start, tol)
    indices = model.kernel.indices(start, size)
    upper = [math.inf, *query.thresholds]
    # band[i] = l - 1 for the band (a_l, a_{l-1}] containing index i
    band = np.full(size, -1)

    for l in range(1, k + 1):
        inside = (indices > upper[l]) & (indices <= upper[l - 1])
        band[inside] = l - 1

    identity = np.eye(size)

    def generating(points: np.ndarray) -> np.ndarray:
        values = np.empty(points.shape[0], dtype=complex)

        for lo in range(0, points.shape[0], DET_BATCH):
            chunk = points[lo : lo + DET_BATCH]
            diagonal = np.where(band >= 0, chunk[:, np.maximum(band, 0)] - 1, 0)
            matrices = identity + diagonal[:, :, None] * window[None, :, :]
            values[lo : lo + DET_BATCH] = np.linalg.det(matrices)

        return values

    coefficients = tensor_taylor_coefficients(
        generating, np.zeros(k), JOINT_CONTOUR_RADIUS, CONTOUR_NODES
    )
    value = float(sum(coefficients[idx].real for idx in lambda_index_set(k)))

    return _check_range(value, tol, f"joint CDF at {query.thresholds}")


def lambda2_crosscheck(
    model: PoissonizedModel, n: int, tol: float = DEFAULT_TOL
) -> IdentityReport:
    """Compare the two expressions for Prob(λ_2 ≤ n+1) - φ^(1)_n.

    The circle path differentiates (1+√s)^{-n} det(1 - √s K_n) at s = 1 with a
    contour of radius 0.25; the lattice path is p_1, the probability of exactly
    one point in [n, ∞).
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}.")

    engine_tol = tol * 0.01
    errors: list[float] = []

    def circle_side(s: complex) -> complex:
        root = cmath.sqrt(s)
        result = fredholm_det_circle(model.symbol, n, root, engine_tol)
        errors.append(result.error_estimate)
        return (1 + root) ** (-n) * result.value

    coefficients = taylor_coefficients(
        circle_side, 1.0, LAMBDA2_CONTOUR_RADIUS, CONTOUR_NODES
    )
    k_side = -coefficients[1]
    counts = model.counts(n, 1, tol)
    s_side = complex(counts[1])
    budget = max(errors, default=0.0) / LAMBDA2_CONTOUR_RADIUS
    residual = relative_residual(k_side, s_side)

    return IdentityReport(
        identity_id="lambda2_consistency",
        params={"t": model.t, "n": n},
        lhs=k_side,
        rhs=s_side,
        prefactor=1.0,
        residual=residual,
        budget=budget,
        passed=residual <= max(tol, budget),
        notes={"phi1": float(counts[0]), "prob_lambda2": float(counts[0] + counts[1])},
    )


def scaled_x(n: int, t: float) -> float:
    """x with 2t/n = 1 - x/(2^{1/3} n^{2/3}), i.e. (n - 2t)·2^{1/3}/n^{1/3}."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}.")

    return (n - 2 * t) * 2 ** (1 / 3) / n ** (1 / 3)


def scaled_row(parts: Sequence[int], N: int, j: int = 1) -> ScaledRow:
    """ξ_j = (λ_j - 2√N)/N^{1/6} for a partition of N."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}.")

    raw = parts[j - 1] if j <= len(parts) else 0
    return ScaledRow(j, raw, N, (raw - 2 * math.sqrt(N)) / N ** (1 / 6))


@dataclass(frozen=True)
class DepoissonizationBracket:
    """Raw de-Poissonization bracket with the unknown constant set to 1.

    Attributes:
        low: φ^(k)_n(t₊), lower end for Prob_N(λ_k ≤ n).
        high: φ^(k)_n(t₋), upper end.
        t_minus: √(N - √N).
        t_plus: √(N + √N).
    """

    low: float
    high: float
    t_minus: float
    t_plus: float


def depoissonization_bracket(
    N: int, n: int, k: int, tol: float = DEFAULT_TOL
) -> DepoissonizationBracket:
    """Row CDFs at t± = (N ± √N)^{1/2} bracketing Prob_N(λ_k ≤ n)."""
    if N < 4:
        raise ValueError(f"N must be at least 4, got {N}.")

    t_minus = math.sqrt(N - math.sqrt(N))
    t_plus = math.sqrt(N + math.sqrt(N))
    low = row_cdf(PoissonizedModel.from_t(t_plus), k, n, tol)
    high = row_cdf(PoissonizedModel.from_t(t_minus), k, n, tol)

    return DepoissonizationBracket(low, high, t_minus, t_plus)


def default_moment_window(t: float) -> tuple[int, int]:
    """Threshold range holding all but a negligible part of the row mass."""
    return 0, math.ceil(2 * t + 8 * t ** (1 / 3) + 12)


def poissonized_moment(
    model: PoissonizedModel,
    k: int,
    a: int,
    n_lo: int,
    n_hi: int,
    tol: float = DEFAULT_TOL,
) -> float:
    """E[ξ_k^a] with ξ_k = (λ_k - 2t)/t^{1/3} by summing over the row pmf.

    Raises:
        WindowTooSmall: If [n_lo, n_hi] misses more than MASS_TOL of the mass.
    """
    if model.t <= 0:
        raise ValueError("Poissonized moments need t > 0.")

    cdf = np.array([row_cdf(model, k, n, tol) for n in range(n_lo - 1, n_hi + 1)])
    xi = (np.arange(n_lo, n_hi + 1) - 2 * model.t) / model.t ** (1 / 3)

    return _moment_from_cdf(cdf, xi, a, n_lo, n_hi)


def default_colored_moment_window(t: float, m: int) -> tuple[int, int]:
    """m times the single-color window."""
    _, n_hi = default_moment_window(t)
    return 0, m * n_hi


def colored_poissonized_moment(
    t: float,
    m: int,
    a: int,
    n_lo: int,
    n_hi: int,
    tol: float = DEFAULT_TOL,
) -> float:
    """E[ξ^a] for the colored λ₁ with ξ = (λ₁ - 2mt)/(m t^{1/3}).

    Centered and scaled for m colors of total mean size m t²; m = 1 gives the
    first-row moment of poissonized_moment.

    Raises:
        WindowTooSmall: If [n_lo, n_hi] misses more than MASS_TOL of the mass.
    """
    if t <= 0:
        raise ValueError("Poissonized moments need t > 0.")

    if m < 1:
        raise ValueError(f"Color count must be positive, got {m}.")

    cdf = np.array(
        [colored_row_cdf(t, m, n, tol) for n in range(n_lo - 1, n_hi + 1)]
    )
    xi = (np.arange(n_lo, n_hi + 1) - 2 * m * t) / (m * t ** (1 / 3))

    return _moment_from_cdf(cdf, xi, a, n_lo, n_hi)


def _moment_from_cdf(
    cdf: np.ndarray, xi: np.ndarray, a: int, n_lo: int, n_hi: int
) -> float:
    # cdf holds the values at n_lo - 1 .. n_hi
    if cdf[0] > MASS_TOL or cdf[-1] < 1 - MASS_TOL:
        raise WindowTooSmall(
            f"Window [{n_lo}, {n_hi}] holds mass {cdf[-1] - cdf[0]:.10f}; widen it."
        )

    pmf = np.diff(cdf)
    pmf[np.abs(pmf) < PMF_CLAMP] = 0.0

    return float(np.sum(xi**a * pmf))


@dataclass(frozen=True)
class TailRow:
    """One sample of a tail probe.

    Attributes:
        n: Threshold.
        t: Parameter.
        x: Scaled threshold.
        tail: 1 - φ (upper) or φ (lower, far).
        underflow: True if tail < UNDERFLOW_TAIL; such rows are not fitted.
    """

    n: int
    t: float
    x: float
    tail: float
    underflow: bool

    @property
    def log_tail(self) -> float:
        return math.log(self.tail) if self.tail > 0 else -math.inf


@dataclass(frozen=True)
class TailProbe:
    """Tail samples and the least-squares slope of log tail.

    The abscissa is |x|^{3/2} for the upper and lower regimes and t for the far
    regime.
    """

    regime: str
    k: int
    rows: list[TailRow]
    slope: float
    intercept: float


def tail_samples(t: float, x_lo: float, x_hi: float) -> list[tuple[int, float]]:
    """Thresholds n ≥ 1 whose scaled_x(n, t) lies in [x_lo, x_hi]."""
    n_max = math.ceil(2 * t + 4 * max(abs(x_lo), abs(x_hi)) * (2 * t + 2) ** (1 / 3))
    return [
        (n, t) for n in range(1, n_max + 1) if x_lo <= scaled_x(n, t) <= x_hi
    ]


def tail_probe(
    k: int,
    regime: Regime,
    samples: Sequence[tuple[int, float]],
    tol: float = DEFAULT_TOL,
) -> TailProbe:
    """Tail quantities along samples (n, t) and their fitted log-decay slope.

    The upper tail is Σ_{j≥k} p_j, summed from the count probabilities so that
    small tails keep their relative accuracy.
    """
    if regime not in ("upper", "lower", "far"):
        raise ValueError(f"Unknown regime {regime!r}.")

    models: dict[float, PoissonizedModel] = {}
    rows: list[TailRow] = []

    for n, t in samples:
        model = models.setdefault(t, PoissonizedModel.from_t(t))
        start = n - k + 1
        size = model.kernel.window_size(start, tol / 100, cap=model.cap)
        counts = np.real(count_distribution(eig_lattice(model.kernel, start, size)))
        if regime == "upper":
            tail = float(np.sum(np.clip(counts[k:], 0, None)))
        else:
            tail = float(np.sum(np.clip(counts[:k], 0, None)))
        rows.append(TailRow(n, t, scaled_x(n, t), tail, tail < UNDERFLOW_TAIL))

    fitted = [row for row in rows if not row.underflow]

    if len(fitted) < 2:
        return TailProbe(regime, k, rows, math.nan, math.nan)

    if regime == "far":
        abscissa = np.array([row.t for row in fitted])
    else:
        abscissa = np.abs([row.x for row in fitted]) ** 1.5

    slope, intercept = np.polyfit(abscissa, [row.log_tail for row in fitted], 1)

    return TailProbe(regime, k, rows, float(slope), float(intercept))
