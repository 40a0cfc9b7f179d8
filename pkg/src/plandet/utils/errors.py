"""Exception hierarchy for the numerical engines.

Library modules never print; they raise one of these exceptions and let the CLI
layer turn them into friendly messages with print_and_raise().

Hierarchy:
    PlandetError
    ├── DescriptorError        malformed symbol descriptor
    │   └── EmptyCoefficients  Laurent descriptor without a nonzero coefficient
    ├── ZeroOnCircle           symbol vanishes at a grid node
    ├── IndexOutOfResolution   coefficient index beyond the FFT grid
    ├── UnreliableWinding      winding number not resolved at max resolution
    ├── NoConvergence          truncation or tail sum did not converge
    ├── NonFinite              NaN or inf in a matrix
    ├── LengthMismatch         breakpoints and weights differ in length
    ├── NearSingularPrefactor  s too close to ±1 for the requested form
    ├── SingularWeight         multi-interval weight 1 + s_k - s_j near zero
    ├── OutOfRange             probability outside [0, 1] beyond tolerance
    ├── WindowTooSmall         moment window misses probability mass
    ├── TooLarge               enumeration size above the supported limit
    ├── DisagreementError      two independent computations disagree
    └── ConfigError            unreadable or invalid configuration file
"""

from __future__ import annotations


class PlandetError(Exception):
    """Base class for all errors raised by plandet."""


class DescriptorError(PlandetError):
    """Symbol descriptor is malformed."""


class EmptyCoefficients(DescriptorError):
    """Laurent descriptor has no nonzero coefficient."""


class ZeroOnCircle(PlandetError):
    """Symbol vanishes on the unit circle within tolerance."""


class IndexOutOfResolution(PlandetError):
    """Requested Fourier index exceeds the coefficient table."""


class UnreliableWinding(PlandetError):
    """Winding number could not be resolved."""


class NoConvergence(PlandetError):
    """A tail sum or truncation did not converge within budget."""


class NonFinite(PlandetError):
    """Matrix contains NaN or infinite entries."""


class LengthMismatch(PlandetError):
    """Parallel parameter lists have different lengths."""


class NearSingularPrefactor(PlandetError):
    """Prefactor exponent base is too close to zero."""


class SingularWeight(PlandetError):
    """Multi-interval lattice weight has a vanishing denominator."""


class OutOfRange(PlandetError):
    """Computed probability lies outside [0, 1] beyond tolerance."""


class WindowTooSmall(PlandetError):
    """Summation window does not capture the required probability mass."""


class TooLarge(PlandetError):
    """Input exceeds the supported enumeration size."""


class DisagreementError(PlandetError):
    """Two independent computations of the same quantity disagree."""


class ConfigError(PlandetError):
    """Configuration file is unreadable or invalid."""
