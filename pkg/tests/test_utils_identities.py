import numpy as np
import pytest

from plandet.utils.errors import LengthMismatch, NearSingularPrefactor, SingularWeight
from plandet.utils.identities import (
    block_probes,
    relative_residual,
    verify_colored,
    verify_conjectured,
    verify_gessel_chain,
    verify_limit,
    verify_multi,
    verify_single,
)
from plandet.utils.oracle import poissonized_prob, row_predicate
from plandet.utils.symbol import bessel, laurent, make_symbol, monomial

TOL = 1e-8

ONE_PLUS_HALF_Z = {"kind": "laurent", "coeffs": {"0": 1, "1": 0.5}}
WINDING_ONE = {
    "kind": "product",
    "factors": [
        {"kind": "laurent", "coeffs": {"1": 1}},
        {"kind": "bessel", "t": 0.5},
    ],
}


def test_relative_residual():
    assert relative_residual(0.5, 0.5) == 0
    assert relative_residual(0.0, 1e-3) == pytest.approx(1e-3)
    assert relative_residual(100.0, 101.0) == pytest.approx(1 / 101)


def test_constant_symbol_both_forms():
    # det(1 - sK_3) = (1+s)^3 for φ ≡ 1, with S_3 = 0 and R_3 = I_3
    one = laurent({0: 1.0})
    for form in ("S", "R"):
        report = verify_single(one, 3, 0.5, form, TOL)
        assert report.lhs == pytest.approx(3.375)
        assert report.rhs == pytest.approx(3.375)
        assert report.passed


@pytest.mark.parametrize("n", range(0, 5))
@pytest.mark.parametrize("form", ["S", "R"])
def test_single_identity_for_bessel_symbol(n, form):
    report = verify_single(bessel(1.0), n, 0.5, form, TOL)
    assert report.identity_id == f"single_{form}"
    assert report.params["winding"] == 0
    assert report.residual <= TOL
    assert report.passed


@pytest.mark.parametrize("s", [0.3, -0.4, 0.2 + 0.3j])
def test_single_identity_for_spectral_parameters(s):
    assert verify_single(make_symbol(ONE_PLUS_HALF_Z), 2, s, "S", TOL).passed


def test_single_identity_with_nonzero_winding():
    sym = make_symbol(WINDING_ONE)
    report = verify_single(sym, 1, 0.5, "S", TOL)
    assert report.params["winding"] == 1
    assert report.prefactor == pytest.approx(1.5**2)
    assert report.passed


def test_single_identity_rejects_singular_prefactor():
    with pytest.raises(NearSingularPrefactor):
        verify_single(bessel(1.0), 2, -1.0, "S", TOL)
    with pytest.raises(NearSingularPrefactor):
        verify_single(bessel(1.0), 2, 1.0, "R", TOL)
    with pytest.raises(ValueError, match="form"):
        verify_single(bessel(1.0), 2, 0.5, "Q", TOL)  # type: ignore[arg-type]


def test_multi_identity_with_one_breakpoint_is_single_identity():
    sym = bessel(1.0)
    multi = verify_multi(sym, [2], [0.5], TOL)
    single = verify_single(sym, 2, 0.5, "S", TOL)
    assert multi.passed
    assert multi.lhs == pytest.approx(single.lhs, abs=1e-8)
    assert multi.prefactor == pytest.approx(single.prefactor)


@pytest.mark.parametrize(
    ("n_vec", "s_vec"),
    [([1, 3], [0.3, 0.6]), ([0, 2, 4], [0.2, 0.5, 0.1]), ([2, 2], [0.4, 0.7])],
)
def test_multi_identity(n_vec, s_vec):
    report = verify_multi(bessel(1.0), n_vec, s_vec, TOL)
    assert report.identity_id == "multi"
    assert report.passed


def test_multi_identity_argument_errors():
    with pytest.raises(LengthMismatch):
        verify_multi(bessel(1.0), [1, 2], [0.5], TOL)
    with pytest.raises(ValueError, match="Breakpoints"):
        verify_multi(bessel(1.0), [3, 1], [0.5, 0.2], TOL)
    with pytest.raises(ValueError, match="breakpoint"):
        verify_multi(bessel(1.0), [], [], TOL)
    with pytest.raises(SingularWeight):
        verify_multi(bessel(1.0), [2], [-1.0], TOL)


def test_block_probes_cover_all_residues():
    probes = block_probes(3, 2)
    residues = {((a - 3) % 2, (b - 3) % 2) for a, b in probes}
    assert residues == {(0, 0), (0, 1), (1, 0), (1, 1)}


@pytest.mark.parametrize("m", [2, 3])
def test_colored_identity(m):
    report = verify_colored(bessel(0.5), m, 1, 0.5, TOL)
    assert report.identity_id == "colored_S"
    assert report.notes["off_block"] == 0
    assert report.notes["on_block"] <= 1e-14
    assert report.passed


def test_colored_identity_with_winding_needs_m_winding():
    # φ(z²) winds twice, so only the exponent n + m·#(φ) balances the identity.
    report = verify_colored(make_symbol(WINDING_ONE), 2, 1, 0.5, TOL)
    assert report.params["winding"] == 1
    assert report.notes["residual_with_m_winding"] <= TOL
    assert report.residual > TOL
    assert not report.passed


def test_colored_identity_rejects_zero_colors():
    with pytest.raises(ValueError, match="Color count"):
        verify_colored(bessel(0.5), 0, 1, 0.5, TOL)


@pytest.mark.parametrize(("t", "n"), [(0.0, 1), (0.5, 2), (1.0, 3), (2.0, 5)])
def test_gessel_chain(t, n):
    report = verify_gessel_chain(t, n, TOL)
    assert report.identity_id == "gessel_consistency"
    assert report.notes["toeplitz"] == pytest.approx(report.notes["lattice"], abs=1e-7)
    assert report.passed


def test_gessel_chain_at_zero_is_one():
    report = verify_gessel_chain(0.0, 2, TOL)
    assert report.lhs == pytest.approx(1)
    assert report.rhs == pytest.approx(1)


@pytest.mark.parametrize(("t", "n"), [(3.5, 2), (1.0, 0), (1.0, 13), (-0.1, 2)])
def test_gessel_chain_range(t, n):
    with pytest.raises(ValueError):
        verify_gessel_chain(t, n, TOL)


@pytest.mark.parametrize("form", ["S", "R"])
def test_limit_is_reached_for_large_n(form):
    n = 14 if form == "S" else -14
    report = verify_limit(bessel(0.5), n, 0.5, form, 1e-6)
    assert report.identity_id == f"limit_{form}"
    assert report.rhs == pytest.approx(1)
    assert report.passed


def test_limit_is_not_reached_for_small_n():
    report = verify_limit(bessel(2.0), 0, 0.5, "S", 1e-6)
    assert not report.passed


@pytest.mark.parametrize("s", [0.25, 0.81])
def test_conjectured_identity(s):
    report = verify_conjectured(bessel(0.5), 2, s, TOL)
    assert report.identity_id == "conjectured"
    assert report.passed


SPECTRAL_VALUES = [0.25, 0.5, 0.9, -0.5]
INDEX_RANGE = range(-4, 9)


def _two_sided(a: float, b: float) -> dict:
    # (1 + az)(1 + b/z)
    return {"kind": "laurent", "coeffs": {"-1": b, "0": 1 + a * b, "1": a}}


IDENTITY_SUITE = [
    pytest.param({"kind": "laurent", "coeffs": {"0": 1}}, id="one"),
    *[
        pytest.param({"kind": "laurent", "coeffs": {str(k): 1}}, id=f"z^{k}")
        for k in (-3, -2, -1, 1, 2, 3)
    ],
    *[
        pytest.param(_two_sided(a, b), id=f"two-sided-{a}-{b}")
        for a in (0.3, 0.6)
        for b in (0.3, 0.6)
    ],
    *[pytest.param({"kind": "bessel", "t": t}, id=f"bessel-{t}") for t in (0.5, 1, 2)],
]


@pytest.mark.parametrize("descriptor", IDENTITY_SUITE)
def test_single_identity_suite(descriptor):
    sym = make_symbol(descriptor)
    for n in INDEX_RANGE:
        for s in SPECTRAL_VALUES:
            for form in ("S", "R"):
                report = verify_single(sym, n, s, form, TOL)
                assert report.residual < 1e-8, (n, s, form, report.residual)


@pytest.mark.parametrize("k", range(-3, 4))
def test_monomial_closed_form(k):
    sym = monomial(k)
    for n in INDEX_RANGE:
        for s in SPECTRAL_VALUES:
            expected = (1 + s) ** (n + k) * (1 - s * s) ** max(0, -k - n)
            lhs = verify_single(sym, n, s, "S", TOL).lhs
            assert abs(lhs - expected) < 1e-10 * max(1.0, abs(expected)), (n, s)


@pytest.mark.parametrize("k", [2, 3])
def test_multi_identity_random_batches(k):
    rng = np.random.default_rng(20 + k)
    sym = bessel(1.0)
    for _ in range(20):
        n_vec = sorted(int(n) for n in rng.integers(0, 7, size=k))
        s_vec = [float(s) for s in rng.uniform(0.0, 0.9, size=k)]
        report = verify_multi(sym, n_vec, s_vec, TOL)
        assert report.residual < 1e-8, (n_vec, s_vec, report.residual)


def test_multi_identity_degenerate_cases():
    sym = bessel(1.0)
    # s_1 = 0 drops the first band
    zero_first = verify_multi(sym, [1, 3], [0.0, 0.5], 1e-11)
    assert zero_first.residual < 1e-10
    assert zero_first.lhs == pytest.approx(verify_single(sym, 3, 0.5, "S", 1e-11).lhs)
    # n_1 = n_2 makes the first band empty
    assert verify_multi(sym, [2, 2], [0.4, 0.7], 1e-11).residual < 1e-10
    assert verify_multi(sym, [2], [0.5], 1e-11).residual < 1e-10


@pytest.mark.parametrize("m", [2, 3])
def test_colored_identity_grid(m):
    for n in range(0, 5):
        report = verify_colored(bessel(0.8), m, n, 0.5, TOL)
        assert report.residual < 1e-8, (n, report.residual)
        assert report.notes["off_block"] == 0


@pytest.mark.parametrize("t", [0.5, 1.0, 1.5])
def test_gessel_chain_matches_oracle(t):
    for n in range(1, 7):
        report = verify_gessel_chain(t, n, TOL)
        assert report.residual < 1e-8
        oracle = poissonized_prob(t, row_predicate(1, n), N_max=25)
        assert oracle.tail_bound < 1e-12
        for value in report.notes.values():
            assert value == pytest.approx(oracle.value, abs=1e-6)


def _wound(w: int):
    # z^w (1 + 0.3z + 0.2/z), winding w
    return laurent({w - 1: 0.2, w: 1.0, w + 1: 0.3})


@pytest.mark.parametrize("w", range(-2, 3))
def test_limits_for_laurent_symbols(w):
    sym = _wound(w)
    distances = []
    for n in (10, 20, 40):
        report = verify_limit(sym, n, 0.2, "S", 1e-6)
        assert report.params["winding"] == w
        distances.append(abs(report.lhs - report.rhs))

    assert distances[-1] < 1e-6
    assert distances[1] <= distances[0] + 1e-10
    assert distances[2] <= distances[1] + 1e-10

    mirrored = verify_limit(sym, -40, 0.2, "R", 1e-6)
    assert abs(mirrored.lhs - mirrored.rhs) < 1e-6
