import dataclasses

import numpy as np
import pytest
import scipy.special

from plandet.utils.errors import (
    DescriptorError,
    EmptyCoefficients,
    IndexOutOfResolution,
    ZeroOnCircle,
)
from plandet.utils.symbol import (
    bessel,
    circle_nodes,
    decay_bound,
    dilated,
    fourier_coeff,
    gessel,
    laurent,
    make_symbol,
    monomial,
    parse_symbol,
    product,
    trace_norm_bounds,
    winding_number,
)

IDENTITY = {"kind": "laurent", "coeffs": {"0": [1, 0]}}
ONE_PLUS_HALF_Z = {"kind": "laurent", "coeffs": {"0": 1, "1": 0.5}}
ONE_PLUS_POINT3_OVER_Z = {"kind": "laurent", "coeffs": {"0": 1, "-1": 0.3}}


def _convolution(sym, m: int) -> complex:
    table = sym.cached_coeffs
    full = np.convolve(table.direct, table.inverse)
    return complex(full[m + 2 * table.half])


def test_identity_symbol_coefficients():
    sym = make_symbol(IDENTITY)
    assert fourier_coeff(sym, "direct", 0) == 1
    assert fourier_coeff(sym, "direct", 3) == 0
    assert fourier_coeff(sym, "inverse", 0) == pytest.approx(1)
    assert sym.support == 0


def test_bessel_zero_is_identity():
    sym = bessel(0)
    assert fourier_coeff(sym, "direct", 0) == pytest.approx(1)
    assert fourier_coeff(sym, "direct", 1) == 0
    assert winding_number(sym).winding == 0


def test_nonvanishing_laurent_accepted():
    sym = make_symbol(ONE_PLUS_HALF_Z)
    assert fourier_coeff(sym, "direct", 1) == pytest.approx(0.5)
    assert sym.sup_norm_inverse == pytest.approx(2.0)
    # (1 + z/2)^{-1} = Σ (-1/2)^j z^j
    assert fourier_coeff(sym, "inverse", 3) == pytest.approx(-0.125, abs=1e-14)
    assert fourier_coeff(sym, "inverse", -1) == pytest.approx(0, abs=1e-14)


def test_bessel_coefficient_matches_series():
    # J_1(1) = Σ_m (-1)^m (1/2)^{2m+1} / (m!(m+1)!)
    assert fourier_coeff(bessel(0.5), "direct", 1) == pytest.approx(
        0.4400505857, abs=1e-10
    )


def test_bessel_inverse_sign_flip_against_fft_path():
    closed = bessel(0.7)
    sampled = make_symbol(
        {"kind": "product", "factors": [{"kind": "bessel", "t": 0.7}]}
    )
    for j in range(-20, 21):
        direct = fourier_coeff(closed, "direct", j)
        assert fourier_coeff(closed, "inverse", j) == pytest.approx((-1) ** j * direct)
        assert fourier_coeff(sampled, "inverse", j) == pytest.approx(
            (-1) ** j * direct, abs=1e-13
        )


def test_gessel_coefficients_are_modified_bessel():
    sym = gessel(0.75)
    for k in range(6):
        value = fourier_coeff(sym, "direct", k)
        assert value.real == pytest.approx(scipy.special.iv(k, 1.5), rel=1e-12)
        assert value.real > 0


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_bessel_three_term_recurrence(t):
    sym = bessel(t)
    for j in range(1, 21):
        left = fourier_coeff(sym, "direct", j - 1) + fourier_coeff(sym, "direct", j + 1)
        right = (j / t) * fourier_coeff(sym, "direct", j)
        assert abs(left - right) < 1e-10


@pytest.mark.parametrize(
    "spec",
    [
        IDENTITY,
        ONE_PLUS_HALF_Z,
        {"kind": "bessel", "t": 1.0},
        {"kind": "gessel", "t": 0.5},
        {"kind": "product", "factors": [ONE_PLUS_HALF_Z, ONE_PLUS_POINT3_OVER_Z]},
        {"kind": "dilated", "m": 2, "base": {"kind": "bessel", "t": 0.8}},
    ],
)
def test_convolution_identity(spec):
    sym = make_symbol(spec)
    for m in range(-20, 21):
        expected = 1.0 if m == 0 else 0.0
        assert abs(_convolution(sym, m) - expected) < 1e-10


def test_truncated_series_reproduces_symbol():
    sym = bessel(1.0)
    J = decay_bound(sym, 1e-12)
    z = circle_nodes(1024)
    orders = np.arange(-J, J + 1)
    series = (sym.coefficients("direct", orders)[None, :] * z[:, None] ** orders).sum(1)
    assert np.max(np.abs(series - sym.evaluate(z))) < 1e-10


def test_winding_numbers():
    assert winding_number(monomial(3)).winding == 3
    assert winding_number(monomial(-2)).winding == -2
    assert winding_number(bessel(1.0)).winding == 0
    sym = make_symbol(
        {"kind": "product", "factors": [ONE_PLUS_HALF_Z, ONE_PLUS_POINT3_OVER_Z]},
        8192,
    )
    result = winding_number(sym)
    assert result.winding == 0
    assert result.reliable
    assert result.confidence < 0.1 * 2 * np.pi


def test_winding_is_additive_over_products():
    a, b = monomial(2), laurent({-1: 1.0, 0: 0.2})
    total = winding_number(a).winding + winding_number(b).winding
    assert winding_number(product(a, b)).winding == total == 1


def test_decay_bounds():
    assert decay_bound(make_symbol(IDENTITY), 1e-10) == 0
    assert decay_bound(bessel(1.0), 1e-12) <= 40
    assert decay_bound(make_symbol(ONE_PLUS_HALF_Z), 1e-8) >= 1
    with pytest.raises(ValueError):
        decay_bound(bessel(1.0), 0)


def test_dilated_symbol():
    base = bessel(1.0)
    sym = dilated(base, 2)
    assert fourier_coeff(sym, "direct", 2) == pytest.approx(scipy.special.jv(1, 2.0))
    assert fourier_coeff(sym, "direct", 1) == 0
    assert fourier_coeff(sym, "inverse", -4) == pytest.approx(
        fourier_coeff(base, "inverse", -2)
    )
    assert winding_number(dilated(monomial(1), 3)).winding == 3
    assert dilated(base, 1) is base


def test_trace_norm_bounds_of_identity():
    bounds = trace_norm_bounds(make_symbol(IDENTITY), 3)
    assert bounds.k == pytest.approx(3)
    assert bounds.s == 0
    assert bounds.r == pytest.approx(3)


def test_trace_norm_bound_of_s_shrinks_with_n():
    sym = bessel(1.0)
    assert trace_norm_bounds(sym, 8).s < trace_norm_bounds(sym, 2).s


def test_with_resolution():
    sym = bessel(1.0).with_resolution(8192)
    assert sym.resolution == 8192
    assert sym.cached_coeffs.half == 4096


def test_symbol_is_immutable():
    sym = bessel(1.0)
    with pytest.raises(dataclasses.FrozenInstanceError):
        sym.t = 2.0  # type: ignore[misc]
    with pytest.raises(ValueError):
        sym.cached_coeffs.direct[0] = 1.0


def test_zero_on_circle():
    with pytest.raises(ZeroOnCircle):
        make_symbol({"kind": "laurent", "coeffs": {"0": 1, "1": 1}})


def test_empty_coefficients():
    with pytest.raises(EmptyCoefficients):
        make_symbol({"kind": "laurent", "coeffs": {"0": 0}})


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "spline"},
        {"kind": "bessel", "t": -1},
        {"kind": "bessel"},
        {"kind": "laurent", "coeffs": {"x": 1}},
        {"kind": "product", "factors": []},
        {"kind": "dilated", "m": 0, "base": IDENTITY},
        [1, 2],
    ],
)
def test_malformed_descriptors(spec):
    with pytest.raises(DescriptorError):
        make_symbol(spec)


def test_parse_symbol():
    assert parse_symbol('{"kind":"bessel","t":1}').t == 1.0
    with pytest.raises(DescriptorError):
        parse_symbol("{not json")


def test_index_out_of_resolution():
    sym = bessel(1.0)
    with pytest.raises(IndexOutOfResolution):
        fourier_coeff(sym, "direct", sym.cached_coeffs.half + 1)
