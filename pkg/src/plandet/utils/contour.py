"""Taylor coefficients by trapezoid rule on Cauchy circles."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np


def circle_points(center: complex, radius: float, nodes: int) -> np.ndarray:
    """Return center + radius·e^{2πik/nodes}, k = 0..nodes-1."""
    return center + radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)


def taylor_coefficients(
    f: Callable[[complex], complex], center: complex, radius: float, nodes: int
) -> np.ndarray:
    """Taylor coefficients a_0..a_{nodes-1} of f around center.

    Exact for polynomials of degree < nodes; otherwise aliased by the coefficients
    of order ≥ nodes scaled by radius^nodes.

    Args:
        f (Callable[[complex], complex]): Function analytic on the closed disk.
        center (complex): Expansion point.
        radius (float): Contour radius.
        nodes (int): Trapezoid nodes.

    Returns:
        np.ndarray: Complex coefficients a_j with f(c + h) = Σ a_j h^j.
    """
    values = np.array([f(z) for z in circle_points(center, radius, nodes)])
    return np.fft.fft(values) / nodes / radius ** np.arange(nodes)


def derivative(
    f: Callable[[complex], complex],
    center: complex,
    order: int,
    radius: float,
    nodes: int,
) -> complex:
    """order-th derivative of f at center via the Cauchy integral formula."""
    if order >= nodes:
        raise ValueError(f"Derivative order {order} needs more than {nodes} nodes.")

    coefficients = taylor_coefficients(f, center, radius, nodes)
    return complex(math.factorial(order) * coefficients[order])


def tensor_taylor_coefficients(
    f: Callable[[np.ndarray], np.ndarray],
    centers: np.ndarray,
    radius: float,
    nodes: int,
) -> np.ndarray:
    """Mixed Taylor coefficients of a function of several variables.

    Args:
        f (Callable[[np.ndarray], np.ndarray]): Vectorized function taking points of
            shape (P, d) and returning P values.
        centers (np.ndarray): Expansion point, shape (d,).
        radius (float): Common contour radius.
        nodes (int): Trapezoid nodes per variable.

    Returns:
        np.ndarray: Array of shape (nodes,)*d; entry [j_1, …, j_d] is the coefficient
            of Π h_l^{j_l}.
    """
    centers = np.asarray(centers, dtype=complex)
    dims = centers.size
    offsets = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    mesh = np.meshgrid(*([offsets] * dims), indexing="ij")
    points = np.stack([axis.ravel() for axis in mesh], axis=1) + centers
    values = np.asarray(f(points)).reshape((nodes,) * dims)
    coefficients = np.fft.fftn(values) / nodes**dims
    scale = radius ** np.arange(nodes)

    for axis in range(dims):
        shape = [1] * dims
        shape[axis] = nodes
        coefficients = coefficients / scale.reshape(shape)

    return coefficients
