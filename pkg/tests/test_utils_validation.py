import pytest
import typer

from plandet.utils.config import Configuration
from plandet.utils.sweep import RunConfig
from plandet.utils.validation import (
    validate_fft_resolution,
    validate_lattice_cap,
    validate_positive_int,
    validate_run_config,
    validate_tol,
)


def _run_config(**overrides) -> RunConfig:
    fields = {
        "command": "verify",
        "symbol": {"kind": "bessel", "t": 1.0},
        "grids": {"n": [0, 1]},
        "tol": 1e-8,
        "output": "json",
        "threads": 1,
        "settings": Configuration.from_default(),
    }
    fields.update(overrides)
    return RunConfig(**fields)


def test_valid_values_pass_through():
    assert validate_tol(1e-8) == 1e-8
    assert validate_tol(1e-14) == 1e-14
    assert validate_positive_int(3, "threads") == 3
    assert validate_fft_resolution(64) == 64
    assert validate_fft_resolution(2**20) == 2**20
    assert validate_lattice_cap(16) == 16
    assert validate_lattice_cap(600) == 600


@pytest.mark.parametrize(
    ("fn", "value"),
    [
        (validate_tol, 1e-15),
        (validate_tol, 0.1),
        (validate_positive_int, 0),
        (validate_fft_resolution, 32),
        (validate_fft_resolution, 3000),
        (validate_fft_resolution, 2**21),
        (validate_lattice_cap, 15),
    ],
)
def test_invalid_values_exit_with_code_2(fn, value):
    with pytest.raises(typer.Exit) as exc:
        fn(value)
    assert exc.value.exit_code == 2


def test_validate_run_config():
    run_config = _run_config()
    assert validate_run_config(run_config) is run_config


@pytest.mark.parametrize(
    "overrides",
    [{"tol": 1.0}, {"threads": 0}, {"output": "xml"}, {"grids": {"n": [0], "s": []}}],
)
def test_validate_run_config_rejects(overrides):
    with pytest.raises(typer.Exit) as exc:
        validate_run_config(_run_config(**overrides))
    assert exc.value.exit_code == 2
