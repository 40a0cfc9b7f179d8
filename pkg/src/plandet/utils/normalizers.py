"""Input normalization utilities for user-provided values.

Converts the strings typed on the command line or stored in the configuration
file into typed parameter grids before they reach the numerical engines.

Normalization Functions:
    normalize_int_str: Parse an integer setting
    normalize_float_str: Parse a float setting
    normalize_output_format: Lowercase and check an output format
    normalize_int_range: Parse '0..6', '3', '0,2,5' or '-4..-1,2' into integers
    normalize_float_list: Parse '0.25,0.5' into floats
    normalize_complex_list: Parse '0.5,0.3+0.1j' into complex numbers
    normalize_thresholds: Parse '3,1' or 'inf,1' into joint-CDF thresholds
    normalize_partition: Parse '2,1' into a partition tuple
    normalize_predicate: Parse 'l1<=2&l2<3' into a partition predicate

Conventions:
    - Ranges are inclusive on both ends: '0..3' is 0, 1, 2, 3
    - Lists are comma separated; whitespace is ignored
    - 'inf', '∞' and 'oo' all denote an infinite threshold
    - Complex numbers accept 'j' or 'i' as imaginary unit
    - Invalid input exits with code 2 via print_and_raise()
"""

from __future__ import annotations

import math
import operator
import re
from collections.abc import Callable
from dataclasses import dataclass

from ..constants import OUTPUT_FORMATS
from .console import print_and_raise

__all__ = [
    "RowPredicate",
    "normalize_complex_list",
    "normalize_float_list",
    "normalize_float_str",
    "normalize_int_range",
    "normalize_int_str",
    "normalize_output_format",
    "normalize_partition",
    "normalize_predicate",
    "normalize_thresholds",
]

INFINITY_TOKENS = {"inf", "+inf", "infinity", "∞", "oo"}

_RANGE_PATTERN = re.compile(r"^(-?\d+)\.\.(-?\d+)$")
_CONDITION_PATTERN = re.compile(r"^l(\d+)\s*(<=|<|>=|>|==)\s*(-?\d+)$")

_OPERATORS: dict[str, Callable[[int, int], bool]] = {
    "<=": operator.le,
    "<": operator.lt,
    ">=": operator.ge,
    ">": operator.gt,
    "==": operator.eq,
}


def _tokens(text: str) -> list[str]:
    tokens = [token.strip() for token in text.split(",")]

    if not text.strip() or any(not token for token in tokens):
        print_and_raise(f"Empty entry in list '{text}'.", code=2)

    return tokens


def normalize_int_str(int_str: str) -> int:
    """Normalize an integer literal.

    Args:
        int_str (str): User provided value.

    Raises:
        typer.Exit: If the value is not an integer.

    Returns:
        int: Parsed integer.
    """
    try:
        return int(int_str.strip())
    except ValueError as e:
        print_and_raise(f"Invalid integer value: '{int_str}'.", raise_from=e, code=2)


def normalize_float_str(float_str: str) -> float:
    """Normalize a float literal.

    Args:
        float_str (str): User provided value.

    Raises:
        typer.Exit: If the value is not a finite float.

    Returns:
        float: Parsed float.
    """
    try:
        value = float(float_str.strip())
    except ValueError as e:
        print_and_raise(f"Invalid float value: '{float_str}'.", raise_from=e, code=2)

    if not math.isfinite(value):
        print_and_raise(f"Value must be finite, got '{float_str}'.", code=2)

    return value


def normalize_output_format(output: str) -> str:
    """Normalize an output format name.

    Args:
        output (str): Raw format name.

    Returns:
        str: Lowercase format name, one of OUTPUT_FORMATS.
    """
    output = output.strip().lower()

    if output not in OUTPUT_FORMATS:
        print_and_raise(
            f"Invalid output format '{output}'. Expected one of: "
            f"{', '.join(OUTPUT_FORMATS)}.",
            code=2,
        )

    return output


def normalize_int_range(text: str) -> list[int]:
    """Parse an integer grid.

    Args:
        text (str): Comma separated integers and inclusive ranges 'a..b'.

    Returns:
        list[int]: Integers in the order given, ranges expanded.

    Example:
        >>> normalize_int_range("-1..1,5")
        [-1, 0, 1, 5]
    """
    values: list[int] = []

    for token in _tokens(text):
        if match := _RANGE_PATTERN.match(token):
            start, stop = int(match.group(1)), int(match.group(2))

            if stop < start:
                print_and_raise(f"Empty range '{token}' (end before start).", code=2)

            values.extend(range(start, stop + 1))
            continue

        try:
            values.append(int(token))
        except ValueError as e:
            print_and_raise(
                f"Invalid integer or range '{token}'. Use e.g. '3', '0..6' or '0,2'.",
                raise_from=e,
                code=2,
            )

    return values


def normalize_float_list(text: str) -> list[float]:
    """Parse a comma separated list of finite floats.

    Args:
        text (str): Raw list.

    Returns:
        list[float]: Parsed values.
    """
    return [normalize_float_str(token) for token in _tokens(text)]


def normalize_complex_list(text: str) -> list[complex]:
    """Parse a comma separated list of complex numbers.

    Args:
        text (str): Raw list such as '0.5,0.3+0.1j' (an 'i' suffix is accepted).

    Returns:
        list[complex]: Parsed values.
    """
    values: list[complex] = []

    for token in _tokens(text):
        literal = token.replace(" ", "").replace("i", "j")

        try:
            value = complex(literal)
        except ValueError as e:
            print_and_raise(f"Invalid complex value '{token}'.", raise_from=e, code=2)

        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            print_and_raise(f"Value must be finite, got '{token}'.", code=2)

        values.append(value)

    return values


def normalize_thresholds(text: str) -> tuple[float, ...]:
    """Parse joint-CDF thresholds a_1 ≥ a_2 ≥ … ≥ a_k.

    Args:
        text (str): Comma separated integers, 'inf' allowed.

    Returns:
        tuple[float, ...]: Thresholds; integers are returned as floats with integral
            value, infinity as math.inf.
    """
    thresholds: list[float] = []

    for token in _tokens(text):
        if token.lower() in INFINITY_TOKENS:
            thresholds.append(math.inf)
            continue

        try:
            thresholds.append(float(int(token)))
        except ValueError as e:
            print_and_raise(
                f"Invalid threshold '{token}'. Use integers or 'inf'.",
                raise_from=e,
                code=2,
            )

    if any(b > a for a, b in zip(thresholds, thresholds[1:])):
        print_and_raise(f"Thresholds must be nonincreasing, got '{text}'.", code=2)

    return tuple(thresholds)


def normalize_partition(text: str) -> tuple[int, ...]:
    """Parse a partition such as '3,1,1'.

    Args:
        text (str): Comma separated positive parts; an empty string is the empty
            partition.

    Returns:
        tuple[int, ...]: Parts in nonincreasing order.
    """
    if not text.strip():
        return ()

    parts = normalize_int_range(text)

    if any(part <= 0 for part in parts):
        print_and_raise(f"Partition parts must be positive, got '{text}'.", code=2)

    if any(b > a for a, b in zip(parts, parts[1:])):
        print_and_raise(f"Partition parts must be nonincreasing, got '{text}'.", code=2)

    return tuple(parts)


@dataclass(frozen=True)
class RowPredicate:
    """Conjunction of row conditions on a partition.

    Attributes:
        conditions: Tuples (row, operator symbol, bound) with 1-based rows.
        text: Normalized textual form, e.g. 'l1<=4&l2<=3'.
    """

    conditions: tuple[tuple[int, str, int], ...]
    text: str

    def __call__(self, parts: tuple[int, ...]) -> bool:
        """Evaluate the predicate on a partition given by its parts."""
        for row, symbol, bound in self.conditions:
            value = parts[row - 1] if row <= len(parts) else 0

            if not _OPERATORS[symbol](value, bound):
                return False

        return True


def normalize_predicate(text: str) -> RowPredicate:
    """Parse a row predicate.

    Args:
        text (str): Conditions 'l<row><op><bound>' joined by '&' or ','. Supported
            operators are <=, <, >=, > and ==.

    Returns:
        RowPredicate: Callable predicate on partition parts.

    Example:
        >>> predicate = normalize_predicate("l1<=2")
        >>> predicate((2, 1)), predicate((3,))
        (True, False)
    """
    conditions: list[tuple[int, str, int]] = []

    for token in re.split(r"[&,]", text):
        token = token.strip().lower()
        match = _CONDITION_PATTERN.match(token)

        if match is None or int(match.group(1)) < 1:
            print_and_raise(
                f"Invalid predicate '{token}'. Use e.g. 'l1<=2' or 'l1<=4&l2<=3'.",
                code=2,
            )

        conditions.append((int(match.group(1)), match.group(2), int(match.group(3))))

    normalized = "&".join(f"l{row}{symbol}{bound}" for row, symbol, bound in conditions)

    return RowPredicate(conditions=tuple(conditions), text=normalized)
