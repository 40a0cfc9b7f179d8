"""Bessel coefficient tables by Miller's backward recurrence.

The symbols e^{t(z - 1/z)} and e^{t(z + 1/z)} have Fourier coefficients J_j(2t)
and I_j(2t). Forward recurrence is unstable once j exceeds the argument, so both
tables are built downward from a starting order well above the last requested
one and normalized afterwards:

    J: J_{k-1}(x) = (2k/x) J_k(x) - J_{k+1}(x)
       magnitude from J_0² + 2 Σ J_k² = 1, sign from J_0 + 2 Σ J_{2k} = 1
    I: I_{k-1}(x) = (2k/x) I_k(x) + I_{k+1}(x)
       normalized by I_0 + 2 Σ I_k = e^x

The unnormalized values grow super-exponentially toward low orders, so the
partial table is rescaled whenever an entry exceeds RESCALE_THRESHOLD; the
highest orders underflow to exact zeros, which is harmless because their true
values are far below double precision.
"""

from __future__ import annotations

import math

import numpy as np

RESCALE_THRESHOLD = 1e150


def _start_order(x: float, jmax: int) -> int:
    base = max(jmax, int(math.ceil(x)))
    start = base + 20 + int(math.sqrt(40 * max(base, 1)))
    return start + (start % 2)


def _backward_table(x: float, start: int, sign: float) -> np.ndarray:
    # f_{start+1} = 0, f_start = seed; sign is -1 for J and +1 for I.
    values = np.zeros(start + 2)
    values[start] = 1e-30

    for k in range(start, 0, -1):
        values[k - 1] = (2.0 * k / x) * values[k] + sign * values[k + 1]

        if abs(values[k - 1]) > RESCALE_THRESHOLD:
            values[k - 1 :] /= RESCALE_THRESHOLD

    values = values[: start + 1]

    return values / np.max(np.abs(values))


def bessel_j_table(x: float, jmax: int) -> np.ndarray:
    """Return J_0(x), …, J_jmax(x).

    Args:
        x (float): Nonnegative argument.
        jmax (int): Largest order.

    Raises:
        ValueError: If x is negative or jmax is negative.

    Returns:
        np.ndarray: Real array of length jmax + 1.

    Example:
        >>> bessel_j_table(1.0, 1)[1]  # J_1(1)
        0.44005058574493355
    """
    if x < 0 or jmax < 0:
        raise ValueError(f"Expected x >= 0 and jmax >= 0, got x={x}, jmax={jmax}.")

    if x == 0:
        table = np.zeros(jmax + 1)
        table[0] = 1.0
        return table

    start = _start_order(x, jmax)
    raw = _backward_table(x, start, sign=-1.0)
    norm = math.sqrt(raw[0] ** 2 + 2.0 * float(np.sum(raw[1:] ** 2)))
    parity = raw[0] + 2.0 * float(np.sum(raw[2::2]))
    table = raw / norm

    if parity < 0:
        table = -table

    return table[: jmax + 1].copy()


def bessel_i_table(x: float, jmax: int) -> np.ndarray:
    """Return I_0(x), …, I_jmax(x).

    Args:
        x (float): Nonnegative argument (x ≤ 700 to keep e^x finite).

    Raises:
        ValueError: If x is negative, too large, or jmax is negative.

    Returns:
        np.ndarray: Real array of length jmax + 1.
    """
    if x < 0 or jmax < 0 or x > 700:
        raise ValueError(
            f"Expected 0 <= x <= 700 and jmax >= 0, got x={x}, jmax={jmax}."
        )

    if x == 0:
        table = np.zeros(jmax + 1)
        table[0] = 1.0
        return table

    start = _start_order(x, jmax)
    raw = _backward_table(x, start, sign=1.0)
    total = raw[0] + 2.0 * float(np.sum(raw[1:]))
    table = raw * (math.exp(x) / total)

    return table[: jmax + 1].copy()


def two_sided(table: np.ndarray, reflection_sign: bool) -> np.ndarray:
    """Extend a table of orders 0..J to orders -J..J.

    Args:
        table (np.ndarray): Values for orders 0..J.
        reflection_sign (bool): If True use f_{-j} = (-1)^j f_j (Bessel J),
            otherwise f_{-j} = f_j (modified Bessel I).

    Returns:
        np.ndarray: Array of length 2J + 1, index j + J holds order j.
    """
    orders = np.arange(1, table.size)
    negative = table[1:][::-1].copy()

    if reflection_sign:
        negative *= ((-1.0) ** orders)[::-1]

    return np.concatenate([negative, table])
