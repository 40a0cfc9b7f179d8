import numpy as np
import pytest

from plandet.utils.errors import LengthMismatch, NoConvergence
from plandet.utils.identities import block_probes
from plandet.utils.kernels import (
    DiscreteKernel,
    QuadratureGrid,
    colored_block_residual,
    k_kernel_matrix,
    k_kernel_value,
    lattice_factors,
    multi_kernel_matrix,
    nystrom_matrix,
    s_entry,
    toeplitz,
)
from plandet.utils.symbol import bessel, circle_nodes, laurent, monomial

ONE = laurent({0: 1.0})


def test_trapezoid_weights_integrate_dz_over_z():
    grid = QuadratureGrid.trapezoid(16)
    assert np.sum(grid.weights / grid.nodes) == pytest.approx(2j * np.pi)
    assert abs(np.sum(grid.weights)) < 1e-14


def test_kernel_value_rejects_points_off_circle():
    with pytest.raises(ValueError, match="unit circle"):
        k_kernel_value(bessel(0.5), 1, 0.5, 1.0)


def test_kernel_matrix_matches_pointwise_values():
    sym = bessel(0.5)
    nodes = circle_nodes(8)
    matrix = k_kernel_matrix(sym, 2, nodes)
    for a in range(8):
        for b in range(8):
            assert matrix[a, b] == pytest.approx(
                k_kernel_value(sym, 2, nodes[a], nodes[b]), abs=1e-13
            )


def test_nystrom_matrix_of_constant_symbol():
    grid = QuadratureGrid.trapezoid(8)
    assert np.allclose(nystrom_matrix(ONE, 0, grid), 0)
    # K_1(z, w) = -1/(2πi w) for φ ≡ 1
    assert np.allclose(nystrom_matrix(ONE, 1, grid), -np.ones((8, 8)) / 8)


def test_multi_kernel_matrix():
    sym = bessel(0.5)
    grid = QuadratureGrid.trapezoid(16)
    single = multi_kernel_matrix(sym, [2], [0.4], grid)
    assert np.allclose(single, 0.4 * nystrom_matrix(sym, 2, grid))

    double = multi_kernel_matrix(sym, [1, 3], [0.4, 0.4], grid)
    assert np.allclose(double, 0.4 * nystrom_matrix(sym, 1, grid))

    with pytest.raises(LengthMismatch):
        multi_kernel_matrix(sym, [1, 2], [0.5], grid)


def test_toeplitz_entries():
    sym = laurent({-1: 0.3, 0: 1.0, 1: 0.5})
    expected = np.array([[1.0, 0.3, 0.0], [0.5, 1.0, 0.3], [0.0, 0.5, 1.0]])
    assert np.allclose(toeplitz(sym, 3).entries, expected)
    assert toeplitz(sym, 0).entries.shape == (0, 0)
    with pytest.raises(ValueError):
        toeplitz(sym, -1)


def test_discrete_kernel_arguments():
    with pytest.raises(ValueError, match="side"):
        DiscreteKernel("T", ONE)  # type: ignore[arg-type]
    with pytest.raises(ValueError, match="Color count"):
        DiscreteKernel("S", ONE, 0)
    kern = DiscreteKernel("S", ONE)
    assert kern.lattice_symbol is ONE


def test_monomial_symbol_entries():
    sym = monomial(-2)
    s_kern = DiscreteKernel("S", sym)
    r_kern = DiscreteKernel("R", sym)
    assert s_entry(s_kern, 0, 0) == pytest.approx(1)
    assert s_entry(s_kern, 1, 1) == pytest.approx(1)
    assert s_entry(s_kern, 2, 2) == 0
    assert s_entry(s_kern, 0, 1) == 0
    assert s_entry(r_kern, 2, 2) == pytest.approx(1)
    assert s_entry(r_kern, 1, 1) == 0


def test_constant_symbol_windows():
    s_kern = DiscreteKernel("S", ONE)
    r_kern = DiscreteKernel("R", ONE)
    assert s_kern.window_size(3, 1e-10) == 0
    assert r_kern.window_size(3, 1e-10) == 3
    assert np.allclose(r_kern.window(3, 3), np.eye(3))
    assert list(r_kern.indices(3, 3)) == [0, 1, 2]
    assert list(s_kern.indices(3, 2)) == [3, 4]


def test_bessel_window_is_symmetric_and_factored():
    kern = DiscreteKernel("S", bessel(1.0))
    window = kern.window(0, 12)
    assert np.allclose(window, window.T.conj(), atol=1e-15)
    a, b = lattice_factors(kern, 0, 12)
    assert np.allclose(a @ b, window)
    eigs = np.linalg.eigvalsh(window)
    assert np.all(eigs > -1e-12)
    assert np.all(eigs < 1 + 1e-12)


def test_window_size_grows_as_tolerance_tightens():
    kern = DiscreteKernel("S", bessel(1.0))
    assert kern.window_size(0, 1e-4) <= kern.window_size(0, 1e-10)
    assert kern.tail_bound(0, 20) < kern.tail_bound(0, 5)


def test_window_size_raises_beyond_cap():
    kern = DiscreteKernel("S", bessel(3.0))
    with pytest.raises(NoConvergence):
        kern.window_size(0, 1e-12, cap=1)


@pytest.mark.parametrize("m", [2, 3])
def test_colored_block_rule(m):
    kern = DiscreteKernel("S", bessel(0.5), m)
    residual = colored_block_residual(kern, block_probes(1, m))
    assert residual.off_block == 0
    assert residual.on_block <= 1e-14
