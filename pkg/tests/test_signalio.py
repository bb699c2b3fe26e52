import numpy as np
import pytest

from smoothscad.errors import InputFormatError
from smoothscad.signalio import format_signal, parse_signal


def test_single_column_round_trip():
    sig = parse_signal("# comment\n1.5\n\n-2\n3e-3\n")
    np.testing.assert_array_equal(sig.values, [1.5, -2.0, 3e-3])
    assert sig.layout == "single"
    again = parse_signal(format_signal(sig, sig.values))
    np.testing.assert_array_equal(again.values, sig.values)


def test_csv_with_header_keeps_t_column():
    sig = parse_signal("t,value\n0.0,1\n0.25,2\n0.5,3\n0.75,4\n")
    assert sig.layout == "csv" and sig.header == "t,value"
    assert sig.t == ["0.0", "0.25", "0.5", "0.75"]
    text = format_signal(sig, [9.0, 8.0, 7.0, 6.0])
    assert text.splitlines()[0] == "t,value"
    assert text.splitlines()[2] == "0.25,8.0"


def test_csv_without_header():
    sig = parse_signal("0,1\n1,2\n")
    assert sig.header is None
    assert format_signal(sig, [5.0, 6.0]) == "0,5.0\n1,6.0\n"


@pytest.mark.parametrize(
    "text,line",
    [
        ("1\n2\nabc\n4\n", 3),
        ("1\n\n2,3\n", 3),
        ("t,value\n0,1\n1\n", 3),
        ("t,value\n0,1\nx,2\n", 3),
        ("0,1\n1,nan\n", 2),
        ("a,b,c\n1,2,3\n", 1),
    ],
)
def test_parse_errors_report_line(text, line):
    with pytest.raises(InputFormatError) as info:
        parse_signal(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_empty_input():
    with pytest.raises(InputFormatError):
        parse_signal("# nothing\n\n")
    with pytest.raises(InputFormatError):
        parse_signal("t,value\n")
