"""Circle symbols and their Fourier coefficients.

A symbol φ is a non-vanishing function on the unit circle. All kernels in this
package are built from the Fourier coefficients φ_j and (φ⁻¹)_j, the winding
number #(φ) and the sup norms of φ and 1/φ, so a Symbol precomputes all of these
when it is constructed and is immutable afterwards. Concurrent readers therefore
need no locking.

Symbol Kinds:
    laurent   Σ c_d z^d with finitely many terms; φ_j exact, (φ⁻¹)_j by FFT
    bessel    e^{t(z - 1/z)}; φ_j = J_j(2t), (φ⁻¹)_j = (-1)^j J_j(2t)
    gessel    e^{t(z + 1/z)}; φ_j = I_j(2t), (φ⁻¹)_j = (-1)^j I_j(2t)
    product   pointwise product of other symbols; both tables by FFT
    dilated   z ↦ ψ(z^m) for a base symbol ψ; coefficients ψ_{j/m}, zero when m ∤ j

Descriptors:
    Symbols are built from small JSON-compatible descriptors:

        {"kind": "bessel", "t": 1.0}
        {"kind": "gessel", "t": 0.5}
        {"kind": "laurent", "coeffs": {"-1": [0.3, 0.0], "0": 1, "1": 0.5}}
        {"kind": "product", "factors": [{...}, {...}]}
        {"kind": "dilated", "m": 2, "base": {...}}

    Laurent coefficients are numbers or [re, im] pairs keyed by degree.

Resolution:
    FFT coefficient extraction starts at DEFAULT_FFT_RESOLUTION nodes and doubles
    (up to MAX_FFT_RESOLUTION) until the outer half of both coefficient tables is
    zero after rounding noise below COEFFICIENT_NOISE_FACTOR·eps·sup|f| has been
    removed. Analytic symbols converge spectrally, so doubling exposes
    convergence cheaply.

Examples:
    >>> sym = make_symbol({"kind": "laurent", "coeffs": {"0": 1, "1": 0.5}})
    >>> fourier_coeff(sym, "direct", 1)
    (0.5+0j)
    >>> winding_number(monomial(3)).winding
    3
"""

from __future__ import annotations

import json
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from ..constants import (
    COEFFICIENT_NOISE_FACTOR,
    DEFAULT_FFT_RESOLUTION,
    MAX_FFT_RESOLUTION,
    WINDING_CONFIDENCE,
    ZERO_ON_CIRCLE_TOL,
)
from .bessel import bessel_i_table, bessel_j_table, two_sided
from .errors import (
    DescriptorError,
    EmptyCoefficients,
    IndexOutOfResolution,
    NoConvergence,
    UnreliableWinding,
    ZeroOnCircle,
)

SymbolKind = Literal["laurent", "bessel", "gessel", "product", "dilated"]
Which = Literal["direct", "inverse"]

SYMBOL_KINDS: tuple[str, ...] = ("laurent", "bessel", "gessel", "product", "dilated")

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class WindingResult:
    """Winding number of a symbol around the origin.

    Attributes:
        winding: Accumulated argument divided by 2π, rounded.
        phase_increments: Argument change per grid step, in radians.
        confidence: Distance of the accumulated phase from the nearest multiple of
            2π.
        resolution: Grid size the result was measured at.
        reliable: True if confidence < 0.1·2π and no single step turned by more
            than π/2.
    """

    winding: int
    phase_increments: np.ndarray = field(repr=False)
    confidence: float
    resolution: int
    reliable: bool


@dataclass(frozen=True)
class CoefficientTable:
    """Two-sided coefficient tables of φ and 1/φ.

    Index j of either array lives at position j + half.

    Attributes:
        half: Largest stored index.
        direct: Coefficients φ_j for -half ≤ j ≤ half.
        inverse: Coefficients (φ⁻¹)_j for -half ≤ j ≤ half.
        support: Largest |j| with a nonzero entry in either table.
    """

    half: int
    direct: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)
    support: int

    def lookup(self, which: Which, idx: np.ndarray | int) -> np.ndarray:
        """Vectorized coefficient lookup; indices beyond the table read as zero."""
        table = self.direct if which == "direct" else self.inverse
        idx = np.asarray(idx)
        values = np.zeros(idx.shape, dtype=complex)
        inside = np.abs(idx) <= self.half
        values[inside] = table[idx[inside] + self.half]
        return values


@dataclass(frozen=True)
class TraceNormBounds:
    """A-priori trace-norm bounds for the operators built from a symbol.

    Attributes:
        k: Bound for the circle operator K_n.
        s: Bound for the lattice operator S_n.
        r: Bound for the lattice operator R_n.
    """

    k: float
    s: float
    r: float


@dataclass(frozen=True, eq=False)
class Symbol:
    """Immutable circle symbol with precomputed coefficient tables.

    Build instances with make_symbol() or the helpers laurent(), bessel(),
    gessel(), product(), dilated() and monomial().

    Attributes:
        kind: Symbol kind.
        descriptor: Canonical descriptor the symbol was built from.
        resolution: Grid size of the coefficient tables.
        cached_coeffs: Precomputed coefficient tables of φ and 1/φ.
        sup_norm: max |φ| on the sampling grid.
        sup_norm_inverse: max |1/φ| on the sampling grid.
        winding_result: Winding number measurement.
        t: Parameter of bessel/gessel symbols.
        coeffs: (degree, coefficient) pairs of laurent symbols.
        factors: Factors of product symbols.
        m: Dilation factor of dilated symbols.
        base: Base symbol of dilated symbols.
    """

    kind: SymbolKind
    descriptor: Mapping[str, Any] = field(repr=False)
    resolution: int
    cached_coeffs: CoefficientTable = field(repr=False)
    sup_norm: float
    sup_norm_inverse: float
    winding_result: WindingResult = field(repr=False)
    t: float = 0.0
    coeffs: tuple[tuple[int, complex], ...] = ()
    factors: tuple[Symbol, ...] = field(default=(), repr=False)
    m: int = 1
    base: Symbol | None = field(default=None, repr=False)

    def evaluate(self, z: np.ndarray | complex) -> np.ndarray:
        """Evaluate φ(z).

        Args:
            z (np.ndarray | complex): Points, normally on the unit circle.

        Returns:
            np.ndarray: φ(z), same shape as z.
        """
        z = np.asarray(z, dtype=complex)

        if self.kind == "laurent":
            values = np.zeros(z.shape, dtype=complex)
            for degree, coefficient in self.coeffs:
                values = values + coefficient * z**degree
            return values

        if self.kind == "bessel":
            return np.exp(self.t * (z - 1.0 / z))

        if self.kind == "gessel":
            return np.exp(self.t * (z + 1.0 / z))

        if self.kind == "product":
            values = np.ones(z.shape, dtype=complex)
            for factor in self.factors:
                values = values * factor.evaluate(z)
            return values

        assert self.base is not None
        return self.base.evaluate(z**self.m)

    def log_derivative(self, z: np.ndarray | complex) -> np.ndarray:
        """Evaluate φ′(z)/φ(z).

        Laurent symbols differentiate their Fourier series term by term; the
        exponential kinds use the closed form of the exponent's derivative.

        Args:
            z (np.ndarray | complex): Points, normally on the unit circle.

        Returns:
            np.ndarray: φ′(z)/φ(z), same shape as z.
        """
        z = np.asarray(z, dtype=complex)

        if self.kind == "laurent":
            derivative = np.zeros(z.shape, dtype=complex)
            for degree, coefficient in self.coeffs:
                derivative = derivative + degree * coefficient * z ** (degree - 1)
            return derivative / self.evaluate(z)

        if self.kind == "bessel":
            return self.t * (1.0 + z**-2)

        if self.kind == "gessel":
            return self.t * (1.0 - z**-2)

        if self.kind == "product":
            total = np.zeros(z.shape, dtype=complex)
            for factor in self.factors:
                total = total + factor.log_derivative(z)
            return total

        assert self.base is not None
        return self.m * z ** (self.m - 1) * self.base.log_derivative(z**self.m)

    def coefficients(self, which: Which, idx: np.ndarray | int) -> np.ndarray:
        """Vectorized φ_j or (φ⁻¹)_j lookup; indices beyond the table read as 0."""
        return self.cached_coeffs.lookup(which, idx)

    @property
    def support(self) -> int:
        """Largest |j| with a nonzero coefficient of φ or 1/φ."""
        return self.cached_coeffs.support

    def bandwidth(self, rel_tol: float) -> int:
        """Smallest J with |φ_j|, |(φ⁻¹)_j| ≤ rel_tol·max(sup norms) for |j| > J.

        Args:
            rel_tol (float): Relative size below which coefficients are ignored.

        Returns:
            int: Effective bandwidth.
        """
        table = self.cached_coeffs
        floor = rel_tol * max(self.sup_norm, self.sup_norm_inverse)
        large = (np.abs(table.direct) > floor) | (np.abs(table.inverse) > floor)
        indices = np.nonzero(large)[0]

        if indices.size == 0:
            return 0

        return int(np.max(np.abs(indices - table.half)))

    def with_resolution(self, resolution: int) -> Symbol:
        """Rebuild the same symbol at another FFT resolution."""
        return make_symbol(self.descriptor, resolution=resolution)


def circle_nodes(points: int) -> np.ndarray:
    """Equispaced nodes e^{2πik/points}, k = 0..points-1."""
    return np.exp(2j * np.pi * np.arange(points) / points)


def _noise_floor(values: np.ndarray) -> float:
    return COEFFICIENT_NOISE_FACTOR * _EPS * float(np.max(np.abs(values)))


def _fft_coefficients(values: np.ndarray) -> np.ndarray:
    points = values.size
    half = points // 2
    raw = np.fft.fft(values) / points
    coefficients = raw[np.arange(-half, half + 1) % points]
    coefficients[np.abs(coefficients) < _noise_floor(values)] = 0
    return coefficients


def _resolved(coefficients: np.ndarray) -> bool:
    half = (coefficients.size - 1) // 2
    quarter = half // 2
    outer = np.concatenate(
        [coefficients[: half - quarter], coefficients[half + quarter + 1 :]]
    )
    return not np.any(outer != 0)


def _check_nonvanishing(values: np.ndarray, points: int):
    smallest = float(np.min(np.abs(values)))

    if smallest <= ZERO_ON_CIRCLE_TOL:
        index = int(np.argmin(np.abs(values)))
        raise ZeroOnCircle(
            f"Symbol vanishes on the unit circle: |φ| = {smallest:.3g} at node "
            f"{index} of {points}."
        )


def _measure_winding(
    evaluate: Callable[[np.ndarray], np.ndarray], resolution: int
) -> WindingResult:
    points = resolution

    while True:
        values = evaluate(circle_nodes(points))
        increments = np.angle(np.roll(values, -1) / values)
        total = float(np.sum(increments))
        winding = round(total / (2 * math.pi))
        confidence = abs(total - 2 * math.pi * winding)
        reliable = (
            confidence < WINDING_CONFIDENCE
            and float(np.max(np.abs(increments))) < math.pi / 2
        )

        if reliable or points >= MAX_FFT_RESOLUTION:
            return WindingResult(
                winding=winding,
                phase_increments=increments,
                confidence=confidence,
                resolution=points,
                reliable=reliable,
            )

        points *= 2


def _sampled_tables(
    evaluate: Callable[[np.ndarray], np.ndarray],
    resolution: int,
    exact_direct: Callable[[int], np.ndarray] | None = None,
) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    points = resolution

    while True:
        values = evaluate(circle_nodes(points))
        _check_nonvanishing(values, points)
        inverse = _fft_coefficients(1.0 / values)
        direct = (
            exact_direct(points) if exact_direct else _fft_coefficients(values)
        )

        if (_resolved(direct) and _resolved(inverse)) or points >= MAX_FFT_RESOLUTION:
            return points, direct, inverse, values

        points *= 2


def _support(direct: np.ndarray, inverse: np.ndarray) -> int:
    half = (direct.size - 1) // 2
    nonzero = np.nonzero((direct != 0) | (inverse != 0))[0]

    if nonzero.size == 0:
        return 0

    return int(np.max(np.abs(nonzero - half)))


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=complex)
    array.setflags(write=False)
    return array


def _parse_complex(raw: Any, where: str) -> complex:
    if isinstance(raw, bool):
        raise DescriptorError(f"Invalid coefficient {raw!r} at {where}.")

    if isinstance(raw, (int, float)):
        return complex(raw)

    if (
        isinstance(raw, (list, tuple))
        and len(raw) == 2
        and all(isinstance(part, (int, float)) for part in raw)
    ):
        return complex(raw[0], raw[1])

    raise DescriptorError(
        f"Invalid coefficient {raw!r} at {where}; expected a number or [re, im]."
    )


def _parse_t(descriptor: Mapping[str, Any]) -> float:
    t = descriptor.get("t")

    if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t):
        raise DescriptorError(f"'{descriptor.get('kind')}' symbol needs a real 't'.")

    if t < 0:
        raise DescriptorError(f"Parameter t must be nonnegative, got {t}.")

    return float(t)


def _canonical_laurent(descriptor: Mapping[str, Any]) -> dict[int, complex]:
    raw = descriptor.get("coeffs")

    if not isinstance(raw, Mapping):
        raise DescriptorError("'laurent' symbol needs a 'coeffs' mapping.")

    coeffs: dict[int, complex] = {}

    for key, value in raw.items():
        try:
            degree = int(key)
        except (TypeError, ValueError) as e:
            raise DescriptorError(f"Invalid Laurent degree {key!r}.") from e

        coefficient = _parse_complex(value, f"degree {key}")

        if coefficient != 0:
            coeffs[degree] = coeffs.get(degree, 0) + coefficient

    coeffs = {degree: c for degree, c in coeffs.items() if c != 0}

    if not coeffs:
        raise EmptyCoefficients("Laurent symbol has no nonzero coefficient.")

    return coeffs


def _build_laurent(descriptor: Mapping[str, Any], resolution: int) -> Symbol:
    coeffs = _canonical_laurent(descriptor)
    max_degree = max(abs(degree) for degree in coeffs)

    while 4 * max_degree > resolution and resolution < MAX_FFT_RESOLUTION:
        resolution *= 2

    if 4 * max_degree > resolution:
        raise IndexOutOfResolution(
            f"Laurent degree {max_degree} exceeds the maximum FFT resolution."
        )

    pairs = tuple(sorted(coeffs.items()))
    canonical = {
        "kind": "laurent",
        "coeffs": {str(d): [c.real, c.imag] for d, c in pairs},
    }

    def evaluate(z: np.ndarray) -> np.ndarray:
        values = np.zeros(z.shape, dtype=complex)
        for degree, coefficient in pairs:
            values = values + coefficient * z**degree
        return values

    def exact_direct(points: int) -> np.ndarray:
        half = points // 2
        table = np.zeros(points + 1, dtype=complex)
        for degree, coefficient in pairs:
            table[degree + half] = coefficient
        return table

    points, direct, inverse, values = _sampled_tables(
        evaluate, resolution, exact_direct
    )

    return _assemble(
        "laurent", canonical, points, direct, inverse, values, evaluate, coeffs=pairs
    )


def _build_closed_form(kind: SymbolKind, t: float, resolution: int) -> Symbol:
    half = resolution // 2

    if kind == "bessel":
        direct = two_sided(bessel_j_table(2 * t, half), reflection_sign=True)

        def evaluate(z: np.ndarray) -> np.ndarray:
            return np.exp(t * (z - 1.0 / z))

    else:
        if 2 * t > 700:
            raise DescriptorError(f"gessel(t) needs 2t <= 700, got t={t}.")
        direct = two_sided(bessel_i_table(2 * t, half), reflection_sign=False)

        def evaluate(z: np.ndarray) -> np.ndarray:
            return np.exp(t * (z + 1.0 / z))

    signs = (-1.0) ** np.abs(np.arange(-half, half + 1))
    inverse = signs * direct
    values = evaluate(circle_nodes(resolution))
    _check_nonvanishing(values, resolution)

    return _assemble(
        kind,
        {"kind": kind, "t": t},
        resolution,
        direct.astype(complex),
        inverse.astype(complex),
        values,
        evaluate,
        t=t,
    )


def _build_product(descriptor: Mapping[str, Any], resolution: int) -> Symbol:
    raw = descriptor.get("factors")

    if not isinstance(raw, (list, tuple)) or not raw:
        raise DescriptorError("'product' symbol needs a nonempty 'factors' list.")

    factors = tuple(make_symbol(factor, resolution) for factor in raw)

    def evaluate(z: np.ndarray) -> np.ndarray:
        values = np.ones(z.shape, dtype=complex)
        for factor in factors:
            values = values * factor.evaluate(z)
        return values

    start = max(factor.resolution for factor in factors)
    points, direct, inverse, values = _sampled_tables(evaluate, start)
    canonical = {
        "kind": "product",
        "factors": [dict(factor.descriptor) for factor in factors],
    }

    return _assemble(
        "product", canonical, points, direct, inverse, values, evaluate, factors=factors
    )


def _build_dilated(descriptor: Mapping[str, Any], resolution: int) -> Symbol:
    m = descriptor.get("m")

    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise DescriptorError(f"'dilated' symbol needs an integer m >= 1, got {m!r}.")

    if "base" not in descriptor:
        raise DescriptorError("'dilated' symbol needs a 'base' descriptor.")

    base = make_symbol(descriptor["base"], resolution)
    base_half = base.cached_coeffs.half
    half = m * base_half
    indices = np.arange(-half, half + 1)
    on_lattice = indices % m == 0
    direct = np.zeros(indices.size, dtype=complex)
    inverse = np.zeros(indices.size, dtype=complex)
    direct[on_lattice] = base.cached_coeffs.direct[indices[on_lattice] // m + base_half]
    inverse[on_lattice] = base.cached_coeffs.inverse[
        indices[on_lattice] // m + base_half
    ]

    def evaluate(z: np.ndarray) -> np.ndarray:
        return base.evaluate(z**m)

    points = m * base.resolution
    values = evaluate(circle_nodes(points))
    _check_nonvanishing(values, points)
    canonical = {"kind": "dilated", "m": m, "base": dict(base.descriptor)}

    return _assemble(
        "dilated", canonical, points, direct, inverse, values, evaluate, m=m, base=base
    )


def _assemble(
    kind: SymbolKind,
    descriptor: Mapping[str, Any],
    resolution: int,
    direct: np.ndarray,
    inverse: np.ndarray,
    values: np.ndarray,
    evaluate: Callable[[np.ndarray], np.ndarray],
    **extra: Any,
) -> Symbol:
    table = CoefficientTable(
        half=(direct.size - 1) // 2,
        direct=_freeze(direct),
        inverse=_freeze(inverse),
        support=_support(direct, inverse),
    )

    return Symbol(
        kind=kind,
        descriptor=descriptor,
        resolution=resolution,
        cached_coeffs=table,
        sup_norm=float(np.max(np.abs(values))),
        sup_norm_inverse=float(np.max(1.0 / np.abs(values))),
        winding_result=_measure_winding(evaluate, resolution),
        **extra,
    )


def make_symbol(
    spec: Mapping[str, Any], resolution: int = DEFAULT_FFT_RESOLUTION
) -> Symbol:
    """Build a Symbol from a descriptor.

    Args:
        spec (Mapping[str, Any]): Symbol descriptor (see module docstring).
        resolution (int, optional): Starting FFT resolution. Defaults to
            DEFAULT_FFT_RESOLUTION.

    Raises:
        DescriptorError: If the descriptor is malformed.
        EmptyCoefficients: If a Laurent descriptor has no nonzero coefficient.
        ZeroOnCircle: If φ vanishes at a grid node within ZERO_ON_CIRCLE_TOL.

    Returns:
        Symbol: Immutable symbol with coefficient tables precomputed.
    """
    if not isinstance(spec, Mapping):
        raise DescriptorError(f"Symbol descriptor must be an object, got {spec!r}.")

    kind = spec.get("kind")

    if kind not in SYMBOL_KINDS:
        raise DescriptorError(
            f"Unknown symbol kind {kind!r}. Expected one of: {', '.join(SYMBOL_KINDS)}."
        )

    if kind == "laurent":
        return _build_laurent(spec, resolution)

    if kind in ("bessel", "gessel"):
        return _build_closed_form(kind, _parse_t(spec), resolution)

    if kind == "product":
        return _build_product(spec, resolution)

    return _build_dilated(spec, resolution)


def parse_symbol(text: str, resolution: int = DEFAULT_FFT_RESOLUTION) -> Symbol:
    """Build a Symbol from a JSON descriptor string.

    Raises:
        DescriptorError: If the text is not valid JSON or not a valid descriptor.
    """
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptorError(f"Symbol descriptor is not valid JSON: {e}") from e

    return make_symbol(spec, resolution)


def laurent(
    coeffs: Mapping[int, complex], resolution: int = DEFAULT_FFT_RESOLUTION
) -> Symbol:
    """Laurent polynomial Σ c_d z^d."""
    return make_symbol(
        {
            "kind": "laurent",
            "coeffs": {
                str(d): [complex(c).real, complex(c).imag] for d, c in coeffs.items()
            },
        },
        resolution,
    )


def monomial(k: int, resolution: int = DEFAULT_FFT_RESOLUTION) -> Symbol:
    """The symbol z^k."""
    return laurent({k: 1.0}, resolution)


def bessel(t: float, resolution: int = DEFAULT_FFT_RESOLUTION) -> Symbol:
    """The symbol e^{t(z - 1/z)}."""
    return make_symbol({"kind": "bessel", "t": t}, resolution)


def gessel(t: float, resolution: int = DEFAULT_FFT_RESOLUTION) -> Symbol:
    """The symbol e^{t(z + 1/z)}."""
    return make_symbol({"kind": "gessel", "t": t}, resolution)


def product(*factors: Symbol) -> Symbol:
    """Pointwise product of symbols."""
    resolution = max(factor.resolution for factor in factors)
    return make_symbol(
        {"kind": "product", "factors": [dict(f.descriptor) for f in factors]},
        resolution,
    )


def dilated(sym: Symbol, m: int) -> Symbol:
    """The symbol z ↦ φ(z^m)."""
    if m == 1:
        return sym

    base_resolution = sym.resolution

    if sym.kind == "dilated":
        base_resolution //= sym.m

    return make_symbol(
        {"kind": "dilated", "m": m, "base": dict(sym.descriptor)}, base_resolution
    )


def fourier_coeff(sym: Symbol, which: Which, j: int) -> complex:
    """Return φ_j (which='direct') or (φ⁻¹)_j (which='inverse').

    Args:
        sym (Symbol): Symbol.
        which (Which): 'direct' or 'inverse'.
        j (int): Fourier index.

    Raises:
        IndexOutOfResolution: If |j| exceeds half the table resolution.

    Returns:
        complex: The coefficient.
    """
    half = sym.cached_coeffs.half

    if abs(j) > half:
        raise IndexOutOfResolution(
            f"Index {j} beyond resolution (|j| <= {half}); rebuild the symbol with "
            "a larger resolution."
        )

    if which not in ("direct", "inverse"):
        raise ValueError(f"which must be 'direct' or 'inverse', got {which!r}.")

    return complex(sym.coefficients(which, j))


def winding_number(sym: Symbol) -> WindingResult:
    """Return the winding number of φ around the origin.

    Raises:
        UnreliableWinding: If the phase could not be resolved at the maximum
            resolution.
    """
    result = sym.winding_result

    if not result.reliable:
        raise UnreliableWinding(
            f"Winding number unresolved at resolution {result.resolution} "
            f"(phase residual {result.confidence:.3g})."
        )

    return result


def decay_bound(sym: Symbol, tol: float) -> int:
    """Smallest J whose weighted coefficient tail drops below tol.

    The tail is Σ_{|l|>J} (|l|+1)(|φ_l| + |(φ⁻¹)_l|)·max(‖φ‖∞, ‖φ⁻¹‖∞).

    Args:
        sym (Symbol): Symbol.
        tol (float): Positive tolerance.

    Raises:
        ValueError: If tol is not positive.
        NoConvergence: If J would exceed half of the resolved table.

    Returns:
        int: Truncation index J.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}.")

    table = sym.cached_coeffs
    half = table.half
    scale = max(sym.sup_norm, sym.sup_norm_inverse)
    magnitude = np.abs(table.direct) + np.abs(table.inverse)
    orders = np.arange(1, half + 1)
    per_order = (orders + 1) * (magnitude[half + orders] + magnitude[half - orders])
    # tails[J] = Σ_{r > J} per_order[r - 1]
    tails = np.concatenate([np.cumsum(per_order[::-1])[::-1], [0.0]]) * scale
    below = np.nonzero(tails < tol)[0]
    first = int(below[0])

    if first > half // 2:
        raise NoConvergence(
            f"Coefficient tail does not drop below {tol:g} within the resolution "
            f"budget (J would be {first} of {half})."
        )

    return first


def trace_norm_bounds(sym: Symbol, n: int) -> TraceNormBounds:
    """A-priori trace-norm bounds for K_n, S_n and R_n.

    Uses ‖K_n‖₁ ≤ |n| + (Σ|jφ_j|)‖φ⁻¹‖∞, ‖S_n‖₁ ≤ (Σ_{l≥n+1} |(l+|n|)φ_{-l}|)‖φ⁻¹‖∞
    and ‖R_n‖₁ ≤ (Σ_{l≤n} |(l+|n|)φ_{-l}|)‖φ⁻¹‖∞.
    """
    table = sym.cached_coeffs
    indices = np.arange(-table.half, table.half + 1)
    magnitude = np.abs(table.direct)
    inv_sup = sym.sup_norm_inverse
    # l runs over -indices so that φ_{-l} is table.direct at index -l.
    l_values = -indices
    weights = np.abs(l_values + abs(n)) * magnitude

    return TraceNormBounds(
        k=abs(n) + float(np.sum(np.abs(indices) * magnitude)) * inv_sup,
        s=float(np.sum(weights[l_values >= n + 1])) * inv_sup,
        r=float(np.sum(weights[l_values <= n])) * inv_sup,
    )
