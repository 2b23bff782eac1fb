import math

import pytest

from gibbs_mixing.formatting import format_items, format_number


@pytest.mark.parametrize("value, expected", [
    (1.0, "1.00000000000"),
    (1234.5, "1234.50000000"),
    (-2.5, "-2.50000000000"),
    (1e-3, "0.00100000000000"),
    (1e-4, "1.00000000000e-04"),
    (1e6, "1.00000000000e+06"),
    (0.0, "0"),
    (9.999999999999, "10.0000000000"),
])
def test_format_number(value, expected):
    assert format_number(value) == expected


def test_special_values():
    assert format_number(math.nan) == "nan"
    assert format_number(-math.inf) == "-inf"
    assert format_number(7) == "7"
    assert format_number(True) == "true"


def test_twelve_significant_digits_survive_parsing():
    value = 2 * math.log(2)
    text = format_number(value)
    assert text == "1.38629436112"
    assert float(text) == pytest.approx(value, rel=1e-11)


def test_format_items():
    text = format_items([("statistics", "bose"), ("delta_s", 0.5), ("n", 2)])
    assert text.splitlines() == ["statistics=bose", "delta_s=0.500000000000", "n=2"]
