import numpy as np
import pytest

from nrange.report import format_cell, render_csv, write_csv, write_curves


def test_float_cells_round_trip_exactly():
    values = [1.0 / 3.0, 1e-17, -2.5, 0.1, np.pi, 1e300, 5.0]
    for v in values:
        assert float(format_cell(v)) == v
    assert format_cell(1.0 / 3.0) == "0.33333333333333331"
    assert format_cell(5.0) == "5"


def test_bool_and_int_cells():
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(42) == "42"
    assert format_cell(np.True_) == "true"
    assert format_cell("plain") == "plain"


def test_csv_quoting_and_line_endings():
    text = render_csv(["a", "b"], [["x,y", 'say "hi"'], [1.5, True]])
    lines = text.split("\n")
    assert lines[0] == "a,b"
    assert lines[1] == '"x,y","say ""hi"""'
    assert lines[2] == "1.5,true"
    assert text.endswith("\n")
    assert "\r" not in text


def test_write_csv_is_byte_stable(tmp_path):
    rows = [[0.1, 2], [0.25, 3]]
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_csv(p1, ["x", "n"], rows)
    write_csv(p2, ["x", "n"], rows)
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_text() == "x,n\n0.10000000000000001,2\n0.25,3\n"


def test_curve_files_are_svg_with_fixed_size(tmp_path):
    xs = [1.0, 2.0, 4.0]
    curves = [("law", xs, [0.1, 0.2, 0.3]), ("seen", xs, [0.1, 0.21, 0.29])]
    p1 = tmp_path / "one.svg"
    p2 = tmp_path / "two.svg"
    write_curves(p1, curves, "m", "quotient", "sweep")
    write_curves(p2, curves, "m", "quotient", "sweep", logx=True)
    head = p1.read_text()[:400]
    assert head.startswith("<?xml")
    assert 'width="800pt"' in head and 'height="500pt"' in head
    assert 'viewBox="0 0 800 500"' in head
    assert p2.read_bytes() != p1.read_bytes()


def test_repeated_renders_are_byte_identical(tmp_path):
    curves = [("only", [0.1, 0.2, 0.3], [3.0, 1.0, 2.0])]
    p1 = tmp_path / "r1.svg"
    p2 = tmp_path / "r2.svg"
    write_curves(p1, curves, "x", "y", "repeat", logy=True)
    write_curves(p2, curves, "x", "y", "repeat", logy=True)
    assert p1.read_bytes() == p2.read_bytes()
