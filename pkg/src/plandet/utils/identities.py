"""Verification drivers for the determinant identities.

Each driver evaluates both sides with independent engines (Nyström on the circle,
truncated lattice windows, Toeplitz matrices) and returns an IdentityReport.

Identities:
    single_S     det(1 - sK_n) = (1+s)^{n+#} det(1 - s²S_n)
    single_R     det(1 - sK_n) = (1-s)^{-n-#} det(1 - s²R_n)
    multi        det(1 - Σ_j (s_j - s_{j-1}) K_{n_j})
                   = (1+s_k)^# Π_{j<k} (1+s_k-s_j)^{n_{j+1}-n_j}
                     · det(1 - Σ_j s_k s_j/(1+s_k-s_j) χ_{[n_j, n_{j+1})} S)
    colored_S/R  the single identities for z ↦ φ(z^m) against the colored kernels
    gessel_consistency
                 e^{-t²} det T_n = 2^{-n} det(1 - K_n) = det(1 - S_n)
    limit_S/R    (1+s)^{-n} det(1 - sK_n) → (1+s)^# as n → ∞ and
                 (1-s)^{n} det(1 - sK_n) → (1-s)^{-#} as n → -∞
    conjectured  (1+√s)^{-n-#} det(1 - √s K_n) = det(1 - sS_n)

Residuals:
    residual = |lhs - rhs| / max(1, |lhs|, |rhs|). The budget is the engines'
    error estimates on the same relative scale, and a report passes when
    residual ≤ max(tol, budget). The right-hand side is always assembled as
    prefactor × determinant, so no division by a small prefactor occurs.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Any, Literal

import numpy as np

from ..constants import SINGULAR_MARGIN
from .errors import LengthMismatch, NearSingularPrefactor, SingularWeight
from .fredholm import (
    DetResult,
    det_dense,
    fredholm_det_circle,
    fredholm_det_lattice,
    fredholm_det_multi,
)
from .kernels import DiscreteKernel, colored_block_residual, toeplitz
from .symbol import Symbol, bessel, dilated, gessel, winding_number

Form = Literal["S", "R"]

MAX_CHAIN_T = 3.0
MAX_CHAIN_N = 12

# Engines run tighter than the requested tolerance so their own error does not
# eat the residual budget.
ENGINE_TOL_FACTOR = 0.1

# On-block entries of colored kernels may differ from the base kernel by rounding.
BLOCK_ROUNDING = 1e-14


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check.

    Attributes:
        identity_id: Which identity was checked.
        params: Parameters of the check.
        lhs: Left-hand side.
        rhs: Right-hand side including the prefactor.
        prefactor: Scalar prefactor of the right-hand side.
        residual: |lhs - rhs| / max(1, |lhs|, |rhs|).
        budget: Engine error estimates on the residual's scale.
        passed: residual ≤ max(tol, budget).
        notes: Extra diagnostics.
    """

    identity_id: str
    params: dict[str, Any]
    lhs: complex
    rhs: complex
    prefactor: complex
    residual: float
    budget: float
    passed: bool
    notes: dict[str, Any] = field(default_factory=dict)


def relative_residual(lhs: complex, rhs: complex) -> float:
    """|lhs - rhs| / max(1, |lhs|, |rhs|)."""
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _report(
    identity_id: str,
    params: dict[str, Any],
    lhs: DetResult,
    determinant: DetResult,
    prefactor: complex,
    tol: float,
    notes: dict[str, Any] | None = None,
) -> IdentityReport:
    rhs = prefactor * determinant.value
    scale = max(1.0, abs(lhs.value), abs(rhs))
    budget = (lhs.error_estimate + abs(prefactor) * determinant.error_estimate) / scale
    residual = relative_residual(lhs.value, rhs)

    return IdentityReport(
        identity_id=identity_id,
        params=params,
        lhs=lhs.value,
        rhs=rhs,
        prefactor=prefactor,
        residual=residual,
        budget=budget,
        passed=residual <= max(tol, budget),
        notes=notes or {},
    )


def _single_prefactor(form: Form, s: complex, exponent: int) -> complex:
    if form == "S":
        if abs(1 + s) <= SINGULAR_MARGIN:
            raise NearSingularPrefactor(f"|1 + s| = {abs(1 + s):.3g} too small.")
        return complex(1 + s) ** exponent

    if abs(1 - s) <= SINGULAR_MARGIN:
        raise NearSingularPrefactor(f"|1 - s| = {abs(1 - s):.3g} too small.")
    return complex(1 - s) ** (-exponent)


def _check_form(form: str):
    if form not in ("S", "R"):
        raise ValueError(f"form must be 'S' or 'R', got {form!r}.")


def verify_single(
    sym: Symbol, n: int, s: complex, form: Form, tol: float
) -> IdentityReport:
    """Check det(1 - sK_n) against the S-form or R-form lattice determinant.

    Raises:
        NearSingularPrefactor: If |1+s| (S-form) or |1-s| (R-form) ≤ 1e-3.
    """
    _check_form(form)
    winding = winding_number(sym).winding
    prefactor = _single_prefactor(form, s, n + winding)
    engine_tol = tol * ENGINE_TOL_FACTOR
    lhs = fredholm_det_circle(sym, n, s, engine_tol)
    kern = DiscreteKernel(form, sym)
    determinant = fredholm_det_lattice(kern, n, s * s, engine_tol)

    return _report(
        f"single_{form}",
        {"symbol": dict(sym.descriptor), "n": n, "s": s, "winding": winding},
        lhs,
        determinant,
        prefactor,
        tol,
    )


def verify_multi(
    sym: Symbol,
    n_vec: Sequence[int],
    s_vec: Sequence[complex],
    tol: float,
) -> IdentityReport:
    """Check the multi-interval identity for breakpoints n_vec and weights s_vec.

    Raises:
        LengthMismatch: If n_vec and s_vec differ in length.
        SingularWeight: If 1 + s_k - s_j is within 1e-3 of zero for some j.
        ValueError: If n_vec is empty, negative or decreasing.
    """
    if len(n_vec) != len(s_vec):
        raise LengthMismatch(
            f"Got {len(n_vec)} breakpoints but {len(s_vec)} weights."
        )

    if not n_vec:
        raise ValueError("At least one breakpoint is required.")

    if n_vec[0] < 0 or any(b < a for a, b in zip(n_vec, n_vec[1:])):
        raise ValueError(f"Breakpoints must satisfy 0 <= n_1 <= ... , got {n_vec}.")

    s_ext = np.array([0, *s_vec], dtype=complex)
    n_ext = [0, *n_vec]
    s_k = s_ext[-1]
    denominators = 1 + s_k - s_ext[:-1]

    near_zero = np.abs(denominators) <= SINGULAR_MARGIN

    if np.any(near_zero) or abs(1 + s_k) <= SINGULAR_MARGIN:
        raise SingularWeight(
            f"A weight denominator 1 + s_k - s_j vanishes for s = {list(s_vec)}."
        )

    band_weights = s_k * s_ext / (1 + s_k - s_ext)
    breakpoints = np.array(n_vec)

    def weight(indices: np.ndarray) -> np.ndarray:
        return band_weights[np.searchsorted(breakpoints, indices, side="right")]

    winding = winding_number(sym).winding
    prefactor = complex(1 + s_k) ** winding
    for j in range(len(n_vec)):
        prefactor *= complex(denominators[j]) ** (n_ext[j + 1] - n_ext[j])

    engine_tol = tol * ENGINE_TOL_FACTOR
    lhs = fredholm_det_multi(sym, n_vec, s_vec, engine_tol)
    determinant = fredholm_det_lattice(
        DiscreteKernel("S", sym), n_vec[0], weight, engine_tol
    )

    return _report(
        "multi",
        {
            "symbol": dict(sym.descriptor),
            "n": list(n_vec),
            "s": list(s_vec),
            "winding": winding,
        },
        lhs,
        determinant,
        prefactor,
        tol,
    )


def block_probes(n: int, m: int) -> list[tuple[int, int]]:
    """Index pairs around n covering every residue combination mod m."""
    indices = range(n, n + 2 * m + 2)
    return [(a, b) for a in indices for b in indices]


def verify_colored(
    sym: Symbol, m: int, n: int, s: complex, tol: float, form: Form = "S"
) -> IdentityReport:
    """Check the colored identity for z ↦ φ(z^m) with the base symbol's winding.

    The notes record the residual obtained with the exponent m·#(φ) instead and
    the block-rule deviations on a probe set. A nonzero off-block entry fails the
    report, as does an on-block deviation above BLOCK_ROUNDING.
    """
    _check_form(form)

    if m < 1:
        raise ValueError(f"Color count must be positive, got {m}.")

    winding = winding_number(sym).winding
    prefactor = _single_prefactor(form, s, n + winding)
    alternative = _single_prefactor(form, s, n + m * winding)
    engine_tol = tol * ENGINE_TOL_FACTOR
    kern = DiscreteKernel(form, sym, m)
    lhs = fredholm_det_circle(dilated(sym, m), n, s, engine_tol)
    determinant = fredholm_det_lattice(kern, n, s * s, engine_tol)
    blocks = colored_block_residual(kern, block_probes(n, m))
    report = _report(
        f"colored_{form}",
        {"symbol": dict(sym.descriptor), "m": m, "n": n, "s": s, "winding": winding},
        lhs,
        determinant,
        prefactor,
        tol,
        {
            "off_block": blocks.off_block,
            "on_block": blocks.on_block,
            "residual_with_m_winding": relative_residual(
                lhs.value, alternative * determinant.value
            ),
        },
    )

    if blocks.off_block != 0 or blocks.on_block > BLOCK_ROUNDING:
        return replace(report, passed=False)

    return report


def verify_gessel_chain(t: float, n: int, tol: float) -> IdentityReport:
    """Compare e^{-t²} det T_n, 2^{-n} det(1 - K_n) and det(1 - S_n).

    Raises:
        ValueError: Outside 0 ≤ t ≤ 3, 1 ≤ n ≤ 12.
    """
    if not 0 <= t <= MAX_CHAIN_T or not 1 <= n <= MAX_CHAIN_N:
        raise ValueError(
            f"Gessel chain supports 0 <= t <= {MAX_CHAIN_T:g}, 1 <= n <= "
            f"{MAX_CHAIN_N}; got t={t}, n={n}."
        )

    engine_tol = tol * ENGINE_TOL_FACTOR
    toeplitz_value = math.exp(-t * t) * det_dense(toeplitz(gessel(t), n).entries)
    sym = bessel(t)
    circle = fredholm_det_circle(sym, n, 1.0, engine_tol)
    lattice = fredholm_det_lattice(DiscreteKernel("S", sym), n, 1.0, engine_tol)
    prefactor = 2.0**-n
    scaled_circle = prefactor * circle.value
    values = (toeplitz_value, scaled_circle, lattice.value)
    residual = max(
        relative_residual(a, b) for i, a in enumerate(values) for b in values[i + 1 :]
    )
    budget = prefactor * circle.error_estimate + lattice.error_estimate

    return IdentityReport(
        identity_id="gessel_consistency",
        params={"t": t, "n": n},
        lhs=toeplitz_value,
        rhs=lattice.value,
        prefactor=prefactor,
        residual=residual,
        budget=budget,
        passed=residual <= max(tol, budget),
        notes={
            "toeplitz": toeplitz_value,
            "circle": scaled_circle,
            "lattice": lattice.value,
        },
    )


def verify_limit(
    sym: Symbol, n: int, s: complex, form: Form, tol: float
) -> IdentityReport:
    """Distance of the normalized determinant from its large-|n| limit.

    form='S' compares (1+s)^{-n} det(1 - sK_n) with (1+s)^#; form='R' compares
    (1-s)^{n} det(1 - sK_n) with (1-s)^{-#}.
    """
    _check_form(form)
    winding = winding_number(sym).winding
    lhs = fredholm_det_circle(sym, n, s, tol * ENGINE_TOL_FACTOR)

    if form == "S":
        scale = complex(1 + s) ** (-n)
        limit = complex(1 + s) ** winding
    else:
        scale = complex(1 - s) ** n
        limit = complex(1 - s) ** (-winding)

    normalized = scale * lhs.value
    budget = abs(scale) * lhs.error_estimate / max(1.0, abs(normalized), abs(limit))
    residual = relative_residual(normalized, limit)

    return IdentityReport(
        identity_id=f"limit_{form}",
        params={"symbol": dict(sym.descriptor), "n": n, "s": s, "winding": winding},
        lhs=normalized,
        rhs=limit,
        prefactor=scale,
        residual=residual,
        budget=budget,
        passed=residual <= max(tol, budget),
    )


def verify_conjectured(sym: Symbol, n: int, s: complex, tol: float) -> IdentityReport:
    """Check (1+√s)^{-n-#} det(1 - √s K_n) = det(1 - sS_n)."""
    root = cmath.sqrt(s)

    if abs(1 + root) <= SINGULAR_MARGIN:
        raise NearSingularPrefactor(f"|1 + √s| = {abs(1 + root):.3g} too small.")

    winding = winding_number(sym).winding
    engine_tol = tol * ENGINE_TOL_FACTOR
    circle = fredholm_det_circle(sym, n, root, engine_tol)
    determinant = fredholm_det_lattice(DiscreteKernel("S", sym), n, s, engine_tol)
    scale = complex(1 + root) ** (-(n + winding))
    lhs = DetResult(
        scale * circle.value,
        abs(scale) * circle.error_estimate,
        circle.resolution_used,
        circle.converged,
    )

    return _report(
        "conjectured",
        {"symbol": dict(sym.descriptor), "n": n, "s": s, "winding": winding},
        lhs,
        determinant,
        1.0,
        tol,
    )
