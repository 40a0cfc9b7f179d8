import math

import numpy as np
import pytest

from plandet.utils.contour import derivative
from plandet.utils.errors import NonFinite
from plandet.utils.fredholm import (
    circle_start_points,
    count_distribution,
    det_dense,
    det_derivatives,
    eig_lattice,
    fredholm_det_circle,
    fredholm_det_lattice,
    fredholm_det_multi,
    fredholm_det_nystrom,
    parity_residual,
    root_order_probe,
)
from plandet.utils.kernels import DiscreteKernel, nystrom_matrix
from plandet.utils.symbol import bessel, laurent

ONE = laurent({0: 1.0})


def test_det_dense():
    assert det_dense(np.array([[2.0, 1.0], [1.0, 3.0]])) == pytest.approx(5)
    assert det_dense(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1)
    assert det_dense(np.zeros((0, 0))) == 1
    assert det_dense(np.array([[1.0, 2.0], [2.0, 4.0]])) == pytest.approx(0)


def test_det_dense_rejects_bad_input():
    with pytest.raises(NonFinite):
        det_dense(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(ValueError, match="square"):
        det_dense(np.ones((2, 3)))


def test_circle_start_points():
    assert circle_start_points(ONE, 0) == 32
    assert circle_start_points(ONE, 40) == 128
    points = circle_start_points(bessel(1.0), 3)
    assert points >= 32
    assert points & (points - 1) == 0


def test_circle_determinant_of_constant_symbol():
    # det(1 - sK_1) = 1 + s for φ ≡ 1
    result = fredholm_det_circle(ONE, 1, 0.5, 1e-10)
    assert result.value == pytest.approx(1.5)
    assert result.converged
    assert result.error_estimate < 1e-10
    assert fredholm_det_circle(ONE, 0, 0.5, 1e-10).value == pytest.approx(1)


def test_circle_determinant_argument_errors():
    with pytest.raises(ValueError, match="tol"):
        fredholm_det_circle(ONE, 1, 0.5, 0)
    with pytest.raises(ValueError, match="exceeds"):
        fredholm_det_nystrom(lambda grid: np.zeros((64, 64)), 1e-8, 64, 32)


def test_circle_determinant_reports_budget_exhaustion():
    sym = bessel(1.0)
    result = fredholm_det_nystrom(
        lambda grid: 0.5 * nystrom_matrix(sym, 2, grid), 1e-300, 8, 16
    )
    assert not result.converged
    assert result.resolution_used == 16


def test_multi_determinant_with_one_breakpoint_matches_single():
    sym = bessel(0.5)
    single = fredholm_det_circle(sym, 2, 0.4, 1e-10)
    multi = fredholm_det_multi(sym, [2], [0.4], 1e-10)
    assert multi.value == pytest.approx(single.value, abs=1e-9)


def test_lattice_determinant_of_constant_symbol():
    kern = DiscreteKernel("R", ONE)
    result = fredholm_det_lattice(kern, 3, 0.5, 1e-10)
    assert result.value == pytest.approx(0.125)
    assert result.resolution_used == 3
    assert result.converged

    by_callable = fredholm_det_lattice(
        kern, 3, lambda idx: np.full(idx.shape, 0.5), 1e-10
    )
    assert by_callable.value == pytest.approx(0.125)


def test_lattice_determinant_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        fredholm_det_lattice(DiscreteKernel("S", ONE), 0, 1.0, -1.0)


def test_eigenvalues_of_constant_symbol_window():
    eigs = eig_lattice(DiscreteKernel("R", ONE), 3, 3)
    assert np.allclose(eigs, [1.0, 1.0, 1.0])
    assert eig_lattice(DiscreteKernel("S", ONE), 3, 0).size == 0
    with pytest.raises(ValueError):
        eig_lattice(DiscreteKernel("S", ONE), 3, 10_000)


def test_count_distribution():
    assert np.allclose(count_distribution(np.array([0.5, 0.5])), [0.25, 0.5, 0.25])
    assert np.allclose(
        count_distribution(np.array([0.5, 0.5]), kmax=4), [0.25, 0.5, 0.25, 0, 0]
    )
    assert np.allclose(count_distribution(np.array([0.5, 0.5]), kmax=0), [0.25])
    assert np.allclose(count_distribution(np.array([])), [1.0])

    rng = np.random.default_rng(7)
    eigs = rng.uniform(0, 1, size=10)
    probabilities = count_distribution(eigs)
    assert probabilities.sum() == pytest.approx(1)
    assert np.all(probabilities >= -1e-15)
    assert probabilities[0] == pytest.approx(np.prod(1 - eigs))


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_det_derivatives_match_contour_derivatives(t):
    kern = DiscreteKernel("S", bessel(t))
    eigs = eig_lattice(kern, 0, 8)
    window = kern.window(0, 8)
    derivatives = det_derivatives(eigs, 4)

    def det_of(r: complex) -> complex:
        return det_dense(np.eye(8) - r * window)

    assert derivatives[0] == pytest.approx(det_of(1.0).real, abs=1e-12)
    for j in range(1, 5):
        by_contour = (-1) ** j * derivative(det_of, 1.0, j, 0.5, 32)
        assert derivatives[j] == pytest.approx(by_contour.real, abs=1e-8)


def test_det_derivatives_scale_counts_by_factorials():
    eigs = np.array([0.2, 0.7, 0.4])
    counts = count_distribution(eigs, 3)
    derivatives = det_derivatives(eigs, 3)
    for j in range(4):
        assert derivatives[j] == pytest.approx(math.factorial(j) * counts[j])


def test_parity_of_the_circle_determinant():
    assert parity_residual(bessel(0.5), 2, 0.3, 1e-11) < 1e-8


def test_root_order_at_minus_one():
    probe = root_order_probe(bessel(0.5), 2)
    assert probe.expected_order == 2
    assert probe.estimated_order == pytest.approx(2, abs=0.05)
    assert len(probe.values) == 2
