"""Exact combinatorial ground truth.

Everything here is computed from partitions and permutations directly, without
any kernel or determinant, so it serves as an independent reference for the
numerical engines.

Plancherel measure:
    Prob_N(λ) = d_λ² / N!, with d_λ from the hook length formula. Sums over
    partitions are done in exact integer arithmetic; plancherel_prob() returns a
    Fraction for N ≤ MAX_EXACT_N, poissonized sums convert to float at the end.

Poissonization:
    Prob^Pois_t = Σ_N e^{-t²} t^{2N}/N! · Prob_N, truncated at N_max with the
    Poisson tail P(N > N_max) reported alongside.

Colored permutations:
    For an m-colored permutation π with per-color RSK shapes λ^(i), the numbers
    m(λ^(i)_j - j) + i are pairwise distinct and λ_k(π) is the k-th largest of
    them plus k. colored_lambda() computes λ_k(π) from this rule and,
    independently, by maximizing scores over unions of monochromatic increasing
    subsequences found by subset search; the two must agree.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import scipy.special

from ..constants import (
    COLORED_PAIR_CUTOFF,
    MAX_ENUMERATION_N,
    MAX_EXACT_N,
    POISSON_TAIL_TARGET,
)
from .errors import DisagreementError, TooLarge

Partition = tuple[int, ...]
Predicate = Callable[[Partition], bool]

MAX_COLORS = 3
MAX_EXHAUSTIVE_LENGTH = 6


def _check_size(N: int, limit: int = MAX_ENUMERATION_N):
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}.")

    if N > limit:
        raise TooLarge(f"N={N} exceeds the enumeration limit {limit}.")


def _partitions(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return

    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first, *rest)


@lru_cache(maxsize=None)
def _partitions_of(N: int) -> tuple[Partition, ...]:
    return tuple(_partitions(N, N))


def enumerate_partitions(N: int) -> list[Partition]:
    """All partitions of N in descending lexicographic order.

    Raises:
        TooLarge: If N > MAX_ENUMERATION_N.
    """
    _check_size(N)
    return list(_partitions_of(N))


def conjugate(parts: Partition) -> Partition:
    """Transposed diagram."""
    if not parts:
        return ()

    return tuple(sum(1 for part in parts if part > j) for j in range(parts[0]))


@lru_cache(maxsize=None)
def dim_syt(parts: Partition) -> int:
    """Number of standard Young tableaux of shape parts (hook length formula).

    Example:
        >>> dim_syt((2, 1))
        2
    """
    columns = conjugate(parts)
    hooks = 1

    for i, length in enumerate(parts):
        for j in range(length):
            hooks *= length - j + columns[j] - i - 1

    return math.factorial(sum(parts)) // hooks


@lru_cache(maxsize=None)
def _plancherel_weights(N: int) -> tuple[tuple[Partition, int], ...]:
    return tuple((parts, dim_syt(parts) ** 2) for parts in _partitions_of(N))


def plancherel_mass(N: int, predicate: Predicate) -> Fraction:
    """Exact Plancherel probability of predicate for N ≤ MAX_ENUMERATION_N."""
    _check_size(N)
    total = sum(weight for parts, weight in _plancherel_weights(N) if predicate(parts))

    return Fraction(total, math.factorial(N))


def plancherel_prob(N: int, predicate: Predicate) -> Fraction:
    """Exact Plancherel probability Σ_{λ⊢N, predicate(λ)} d_λ²/N!.

    Raises:
        TooLarge: If N > MAX_EXACT_N.

    Example:
        >>> plancherel_prob(4, lambda parts: parts[0] <= 2)
        Fraction(7, 12)
    """
    _check_size(N, MAX_EXACT_N)
    return plancherel_mass(N, predicate)


def poisson_weight(t: float, N: int) -> float:
    """e^{-t²} t^{2N} / N!."""
    if t == 0:
        return 1.0 if N == 0 else 0.0

    return math.exp(-t * t + 2 * N * math.log(t) - math.lgamma(N + 1))


def poisson_tail(t: float, N_max: int) -> float:
    """P(N > N_max) for N ~ Poisson(t²)."""
    if t == 0:
        return 0.0

    return float(scipy.special.gammainc(N_max + 1, t * t))


def default_n_max(t: float) -> int:
    """Poisson truncation ⌈t² + 12t + 30⌉, capped at MAX_ENUMERATION_N."""
    return min(math.ceil(t * t + 12 * t + 30), MAX_ENUMERATION_N)


@dataclass(frozen=True)
class PoissonizedResult:
    """Truncated Poissonized probability.

    Attributes:
        value: Σ_{N ≤ n_max} e^{-t²} t^{2N}/N! · Prob_N.
        tail_bound: P(N > n_max), an upper bound for the truncation error.
        n_max: Truncation point.
    """

    value: float
    tail_bound: float
    n_max: int


def poissonized_prob(
    t: float, predicate: Predicate, N_max: int | None = None
) -> PoissonizedResult:
    """Poissonized Plancherel probability of predicate.

    Raises:
        TooLarge: If N_max > MAX_ENUMERATION_N.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}.")

    n_max = default_n_max(t) if N_max is None else N_max
    _check_size(n_max)
    value = sum(
        poisson_weight(t, N) * float(plancherel_mass(N, predicate))
        for N in range(n_max + 1)
    )

    return PoissonizedResult(value, poisson_tail(t, n_max), n_max)


def row(parts: Partition, k: int) -> int:
    """λ_k, zero beyond the last row."""
    return parts[k - 1] if k <= len(parts) else 0


def rsk_shape(perm: Sequence[int]) -> Partition:
    """Shape of the RSK insertion tableau of a sequence of distinct numbers."""
    rows: list[list[int]] = []

    for value in perm:
        for current in rows:
            position = bisect.bisect_left(current, value)

            if position == len(current):
                current.append(value)
                break

            current[position], value = value, current[position]
        else:
            rows.append([value])

    return tuple(len(current) for current in rows)


def patience_lis(seq: Sequence[int]) -> int:
    """Longest strictly increasing subsequence by patience sorting."""
    piles: list[int] = []

    for value in seq:
        position = bisect.bisect_left(piles, value)

        if position == len(piles):
            piles.append(value)
        else:
            piles[position] = value

    return len(piles)


@dataclass(frozen=True)
class ColoredPermutation:
    """Permutation of 1..n with a color 0..m-1 per entry.

    Attributes:
        values: π(1), …, π(n).
        colors: Color of each entry.
        m: Number of colors.
    """

    values: tuple[int, ...]
    colors: tuple[int, ...]
    m: int

    def __post_init__(self):
        if sorted(self.values) != list(range(1, len(self.values) + 1)):
            raise ValueError(f"Values {self.values} are not a permutation of 1..n.")

        if len(self.colors) != len(self.values):
            raise ValueError("Every entry needs exactly one color.")

        if self.m < 1 or any(not 0 <= c < self.m for c in self.colors):
            raise ValueError(f"Colors must lie in 0..{self.m - 1}, got {self.colors}.")

    def monochromatic(self, color: int) -> tuple[int, ...]:
        """Values of the given color in position order."""
        return tuple(v for v, c in zip(self.values, self.colors) if c == color)


def color_shapes(pi: ColoredPermutation) -> list[Partition]:
    """RSK shape λ^(i) of each monochromatic subsequence."""
    return [rsk_shape(pi.monochromatic(color)) for color in range(pi.m)]


def lambda_numbers(shapes: Sequence[Partition], m: int, depth: int) -> list[int]:
    """The numbers m(λ^(i)_j - j) + i for j = 1..depth, in descending order."""
    numbers = [
        m * (row(shape, j) - j) + color
        for color, shape in enumerate(shapes)
        for j in range(1, depth + 1)
    ]
    return sorted(numbers, reverse=True)


def lambda_set(pi: ColoredPermutation, depth: int | None = None) -> list[int]:
    """Shifted row numbers of π; raises DisagreementError if two coincide."""
    depth = len(pi.values) + 1 if depth is None else depth
    numbers = lambda_numbers(color_shapes(pi), pi.m, depth)

    if len(set(numbers)) != len(numbers):
        raise DisagreementError(
            f"Shifted row numbers of {pi} are not distinct: {numbers}."
        )

    return numbers


def superimpose(shapes: Sequence[Partition], m: int) -> Partition:
    """λ(π) from per-color shapes: λ_k = (k-th largest number) + k."""
    size = sum(sum(shape) for shape in shapes)
    numbers = lambda_numbers(shapes, m, size + 1)
    parts = [numbers[k - 1] + k for k in range(1, m * size + 1)]

    return tuple(part for part in parts if part > 0)


def _longest_decreasing(seq: Sequence[int]) -> int:
    return patience_lis([-value for value in seq])


def _greene_by_subsets(seq: Sequence[int], c: int) -> int:
    # Largest subsequence that is a union of c increasing ones, i.e. whose
    # longest decreasing subsequence has length ≤ c.
    for size in range(len(seq), -1, -1):
        for positions in combinations(range(len(seq)), size):
            if _longest_decreasing([seq[p] for p in positions]) <= c:
                return size

    return 0


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return

    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def colored_score(pi: ColoredPermutation, k: int) -> int:
    """l_k(π): best score of a union of k monochromatic increasing subsequences.

    Choosing k_i subsequences of color i scores
    m·Σ L_i(k_i) + C(k+1, 2) + Σ (i·k_i - m·C(k_i+1, 2)), with L_i(c) the
    largest union of c increasing subsequences of color i.
    """
    if len(pi.values) > MAX_EXHAUSTIVE_LENGTH:
        raise TooLarge(
            f"Exhaustive scores support n <= {MAX_EXHAUSTIVE_LENGTH}, "
            f"got {len(pi.values)}."
        )

    m = pi.m
    sequences = [pi.monochromatic(color) for color in range(m)]
    greene = [
        [_greene_by_subsets(seq, c) for c in range(k + 1)] for seq in sequences
    ]
    best: int | None = None

    for counts in _compositions(k, m):
        score = k * (k + 1) // 2
        for color, count in enumerate(counts):
            score += m * greene[color][count]
            score += color * count - m * count * (count + 1) // 2
        best = score if best is None else max(best, score)

    assert best is not None
    return best


def colored_lambda(pi: ColoredPermutation, k: int) -> int:
    """λ_k(π) by the superposition rule, checked against exhaustive score maximization.

    Raises:
        DisagreementError: If the two computations differ.
    """
    if k < 1:
        raise ValueError(f"Row index must be positive, got {k}.")

    numbers = lambda_set(pi, len(pi.values) + k)
    by_formula = numbers[k - 1] + k
    by_search = colored_score(pi, k) - colored_score(pi, k - 1)

    if by_formula != by_search:
        raise DisagreementError(
            f"λ_{k} of {pi}: superposition rule gives {by_formula}, score search gives "
            f"{by_search}."
        )

    return by_formula


def colored_partition(pi: ColoredPermutation) -> Partition:
    """Full λ(π) by the superposition rule; a partition of m·n."""
    return superimpose(color_shapes(pi), pi.m)


def _weighted_shapes(t: float, n_max: int) -> list[tuple[Partition, float]]:
    weighted = []

    for N in range(n_max + 1):
        scale = poisson_weight(t, N) / math.factorial(N)
        weighted.extend((parts, scale * d2) for parts, d2 in _plancherel_weights(N))

    return weighted


def colored_poissonized_prob(
    t: float, m: int, predicate: Predicate, N_max: int | None = None
) -> PoissonizedResult:
    """Probability of predicate(λ(π)) for m independent Poissonized colors.

    Each color draws an independent Poissonized Plancherel shape with parameter
    t; λ(π) is their superposition by the superposition rule. Per-color sizes are cut
    where the Poisson tail drops below POISSON_TAIL_TARGET and m-tuples with
    product weight below COLORED_PAIR_CUTOFF are skipped.

    Raises:
        TooLarge: If m > MAX_COLORS or the truncation exceeds the enumeration
            limit.
    """
    if m < 1 or m > MAX_COLORS:
        raise TooLarge(f"Colored oracle supports 1 <= m <= {MAX_COLORS}, got {m}.")

    if N_max is None:
        n_max = 0
        while poisson_tail(t, n_max) > POISSON_TAIL_TARGET:
            n_max += 1
    else:
        n_max = N_max

    _check_size(n_max)
    shapes = _weighted_shapes(t, n_max)
    shapes.sort(key=lambda item: -item[1])
    value = 0.0

    def walk(prefix: list[Partition], weight: float):
        nonlocal value

        if len(prefix) == m:
            if predicate(superimpose(prefix, m)):
                value += weight
            return

        for parts, w in shapes:
            if weight * w < COLORED_PAIR_CUTOFF:
                break
            walk([*prefix, parts], weight * w)

    walk([], 1.0)
    tail = 1 - (1 - poisson_tail(t, n_max)) ** m

    pruned = COLORED_PAIR_CUTOFF * len(shapes) ** m

    return PoissonizedResult(value, tail + pruned, n_max)


def row_predicate(k: int, n: int) -> Predicate:
    """Predicate λ_k ≤ n."""
    return lambda parts: row(parts, k) <= n


def q_table(N_max: int, k: int) -> list[list[Fraction]]:
    """q[N][n] = Prob_N(λ_k ≤ n) for 0 ≤ N, n ≤ N_max, exactly."""
    _check_size(N_max, MAX_EXACT_N)
    return [
        [plancherel_prob(N, row_predicate(k, n)) for n in range(N_max + 1)]
        for N in range(N_max + 1)
    ]


def q_monotone(table: list[list[Fraction]]) -> bool:
    """True if q[N+1][n] ≤ q[N][n] everywhere."""
    return all(
        later <= earlier
        for current, following in zip(table, table[1:])
        for earlier, later in zip(current, following)
    )


def plancherel_moment(N: int, k: int, a: int) -> float:
    """E[ξ_k^a] under Plancherel_N with ξ_k = (λ_k - 2√N)/N^{1/6}."""
    _check_size(N)

    if N == 0:
        raise ValueError("Scaled rows need N >= 1.")

    scale = N ** (1 / 6)
    center = 2 * math.sqrt(N)
    moment = sum(
        weight * ((row(parts, k) - center) / scale) ** a
        for parts, weight in _plancherel_weights(N)
    )

    return moment / math.factorial(N)


def poissonized_row_moment(
    t: float, k: int, a: int, N_max: int | None = None
) -> PoissonizedResult:
    """E[ξ_k^a] under Poissonized Plancherel with ξ_k = (λ_k - 2t)/t^{1/3}.

    The reported tail is P(N > n_max) scaled by |ξ_k|^a at λ_k = n_max. It is an
    estimate of the truncation error, not a bound.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}.")

    n_max = default_n_max(t) if N_max is None else N_max
    _check_size(n_max)
    scale = t ** (1 / 3)
    moment = 0.0

    for N in range(n_max + 1):
        inner = sum(
            weight * ((row(parts, k) - 2 * t) / scale) ** a
            for parts, weight in _plancherel_weights(N)
        )
        moment += poisson_weight(t, N) * inner / math.factorial(N)

    reach = max(abs(n_max - 2 * t), 2 * t) / scale
    return PoissonizedResult(moment, poisson_tail(t, n_max) * reach**a, n_max)
