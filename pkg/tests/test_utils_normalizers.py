import math

import pytest
import typer

from plandet.utils.normalizers import (
    normalize_complex_list,
    normalize_float_list,
    normalize_float_str,
    normalize_int_range,
    normalize_int_str,
    normalize_output_format,
    normalize_partition,
    normalize_predicate,
    normalize_thresholds,
)


def _exit_code(fn, *args) -> int:
    with pytest.raises(typer.Exit) as exc:
        fn(*args)
    return exc.value.exit_code


def test_normalize_scalars():
    assert normalize_int_str(" 12 ") == 12
    assert normalize_float_str("1e-10") == 1e-10
    assert normalize_output_format(" CSV ") == "csv"


@pytest.mark.parametrize(
    ("fn", "value"),
    [
        (normalize_int_str, "1.5"),
        (normalize_float_str, "abc"),
        (normalize_float_str, "inf"),
        (normalize_output_format, "xml"),
    ],
)
def test_normalize_scalars_reject_invalid(fn, value):
    assert _exit_code(fn, value) == 2


def test_normalize_int_range():
    assert normalize_int_range("3") == [3]
    assert normalize_int_range("0..3") == [0, 1, 2, 3]
    assert normalize_int_range("-1..1,5") == [-1, 0, 1, 5]
    assert normalize_int_range(" -4..-2 , 7 ") == [-4, -3, -2, 7]


@pytest.mark.parametrize("value", ["", "3..1", "a", "1,,2", "1..b"])
def test_normalize_int_range_rejects_invalid(value):
    assert _exit_code(normalize_int_range, value) == 2


def test_normalize_float_and_complex_lists():
    assert normalize_float_list("0.25, 0.5") == [0.25, 0.5]
    assert normalize_complex_list("0.5,0.3+0.1j,-1i") == [0.5, 0.3 + 0.1j, -1j]
    assert _exit_code(normalize_complex_list, "1+") == 2
    assert _exit_code(normalize_complex_list, "nan") == 2


def test_normalize_thresholds():
    assert normalize_thresholds("3,1") == (3.0, 1.0)
    assert normalize_thresholds("inf,1") == (math.inf, 1.0)
    assert normalize_thresholds("∞,2,2") == (math.inf, 2.0, 2.0)
    assert _exit_code(normalize_thresholds, "1,3") == 2
    assert _exit_code(normalize_thresholds, "x") == 2


def test_normalize_partition():
    assert normalize_partition("3,1,1") == (3, 1, 1)
    assert normalize_partition("") == ()
    assert _exit_code(normalize_partition, "1,2") == 2
    assert _exit_code(normalize_partition, "2,0") == 2


def test_normalize_predicate():
    predicate = normalize_predicate("L1 <= 4 & l2<=3")
    assert predicate.text == "l1<=4&l2<=3"
    assert predicate((4, 3))
    assert not predicate((5,))
    assert not predicate((4, 4))
    assert normalize_predicate("l3==0")((2, 1))
    assert normalize_predicate("l1>2,l2<1")((3,))


@pytest.mark.parametrize("value", ["l0<=1", "k1<=2", "l1=<2", ""])
def test_normalize_predicate_rejects_invalid(value):
    assert _exit_code(normalize_predicate, value) == 2
