import json
from fractions import Fraction

import pytest

from geometry.core import DirectedLine, Direction, LineSet, Point, PointSet, VerticalLineException
from geometry.fileio import (
    InstanceFileException,
    line_from_json,
    line_set_from_json,
    line_set_to_json,
    line_to_json,
    point_set_from_json,
    point_set_to_json,
    rational_from_json,
    rational_to_json,
    read_json,
    write_json,
    write_text,
)


def test_rational_text():
    assert rational_to_json(Fraction(6, 4)) == "3/2"
    assert rational_to_json(Fraction(-2)) == "-2"
    assert rational_from_json("3/2") == Fraction(3, 2)
    assert rational_from_json(7) == 7


@pytest.mark.parametrize("value", [0.5, True, None, "x/y", "1/0", [1, 2]])
def test_rational_refused(value):
    with pytest.raises(InstanceFileException):
        rational_from_json(value)


def test_point_set_file(tmp_path):
    p = PointSet.of([(0, 0), ("1/3", -2)], "sample")
    path = str(tmp_path / "points.json")
    write_json(path, point_set_to_json(p))
    with open(path) as point_file:
        assert json.load(point_file)["points"] == [["0", "0"], ["1/3", "-2"]]
    assert point_set_from_json(read_json(path)) == p


def test_line_set_file(tmp_path):
    lines = LineSet((DirectedLine(1, 0), DirectedLine(Fraction(-1, 2), 2, Direction.LEFTWARD)), "mixed")
    path = str(tmp_path / "lines.json")
    write_json(path, line_set_to_json(lines))
    assert line_set_from_json(read_json(path)) == lines


def test_rightward_lines_omit_direction():
    assert line_to_json(DirectedLine(1, 2)) == ["1", "2"]
    assert line_to_json(DirectedLine(1, 2, Direction.LEFTWARD)) == ["1", "2", "leftward"]


def test_vertical_line_refused():
    with pytest.raises(VerticalLineException):
        line_from_json({"vertical": "1"})


@pytest.mark.parametrize("line_json", [None, ["1"], ["1", "2", "sideways"], "y=x"])
def test_malformed_line(line_json):
    with pytest.raises(InstanceFileException):
        line_from_json(line_json)


def test_read_json_errors(tmp_path):
    with pytest.raises(InstanceFileException):
        read_json(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(InstanceFileException):
        read_json(str(broken))
    array = tmp_path / "array.json"
    array.write_text("[1, 2]")
    with pytest.raises(InstanceFileException):
        read_json(str(array))
    no_points = tmp_path / "no_points.json"
    no_points.write_text('{"label": "x"}')
    with pytest.raises(InstanceFileException):
        point_set_from_json(read_json(str(no_points)))


def test_write_text_replaces_atomically(tmp_path):
    path = tmp_path / "nested" / "out.txt"
    write_text(str(path), "first")
    write_text(str(path), "second")
    assert path.read_text() == "second"
    assert [child.name for child in path.parent.iterdir()] == ["out.txt"]


def test_points_keep_exact_values(tmp_path):
    p = PointSet((Point(Fraction(1, 3), Fraction(-7, 9)),))
    path = str(tmp_path / "exact.json")
    write_json(path, point_set_to_json(p))
    assert point_set_from_json(read_json(path))[0].x == Fraction(1, 3)
