"""Contains readers and writers for the JSON instance files"""
import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Dict, List, Optional

from geometry.core import (
    DirectedLine,
    Direction,
    LineSet,
    Point,
    PointSet,
    to_rational,
    VerticalLineException,
)


class InstanceFileException(Exception):
    """
    Thrown if an instance file cannot be read or has an unexpected shape
    """

    pass


def rational_to_json(value: Fraction) -> str:
    # "p" for integers, "p/q" otherwise; str(Fraction) is already canonical
    return str(value)


def rational_from_json(value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InstanceFileException(f"Rational must be an integer or 'p/q' text, got {value!r}")
    try:
        return to_rational(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InstanceFileException(f"Invalid rational {value!r}: {e}")


def point_to_json(p: Point) -> List[str]:
    return [rational_to_json(p.x), rational_to_json(p.y)]


def point_from_json(point_json: Any) -> Point:
    if not isinstance(point_json, list) or len(point_json) != 2:
        raise InstanceFileException(f"Point must be [x, y], got {point_json!r}")
    return Point(rational_from_json(point_json[0]), rational_from_json(point_json[1]))


def point_set_to_json(s: PointSet) -> Dict[str, Any]:
    return {"label": s.label, "points": [point_to_json(p) for p in s]}


def point_set_from_json(point_set_json: Any) -> PointSet:
    if not isinstance(point_set_json, dict) or "points" not in point_set_json:
        raise InstanceFileException("Point set needs a 'points' field")
    return PointSet(
        tuple(point_from_json(p) for p in point_set_json["points"]),
        str(point_set_json.get("label", "")),
    )


def line_to_json(line: DirectedLine) -> List[str]:
    line_json = [rational_to_json(line.slope), rational_to_json(line.intercept)]
    if line.direction != Direction.RIGHTWARD:
        line_json.append(line.direction.value)
    return line_json


def line_from_json(line_json: Any) -> DirectedLine:
    if line_json is None:
        raise InstanceFileException("Line is missing")
    if isinstance(line_json, dict):
        # {"vertical": x} is how a user would try to write x = c
        raise VerticalLineException(
            f"Vertical line {line_json!r} refused; apply generic_shear to the configuration."
        )
    if not isinstance(line_json, list) or len(line_json) not in (2, 3):
        raise InstanceFileException(f"Line must be [slope, intercept(, direction)], got {line_json!r}")
    direction = Direction.RIGHTWARD
    if len(line_json) == 3:
        try:
            direction = Direction(line_json[2])
        except ValueError:
            raise InstanceFileException(f"Unknown direction {line_json[2]!r}")
    return DirectedLine(
        rational_from_json(line_json[0]), rational_from_json(line_json[1]), direction
    )


def line_set_to_json(lines: LineSet) -> Dict[str, Any]:
    return {"label": lines.label, "lines": [line_to_json(line) for line in lines]}


def line_set_from_json(line_set_json: Any) -> LineSet:
    if not isinstance(line_set_json, dict) or "lines" not in line_set_json:
        raise InstanceFileException("Line set needs a 'lines' field")
    return LineSet(
        tuple(line_from_json(line) for line in line_set_json["lines"]),
        str(line_set_json.get("label", "")),
    )


def optional_rational_to_json(value: Optional[Fraction]) -> Optional[str]:
    return None if value is None else rational_to_json(value)


def optional_rational_from_json(value: Any) -> Optional[Fraction]:
    return None if value is None else rational_from_json(value)


def read_json(path: str) -> Dict[str, Any]:
    """
    Reads a JSON document
    Args:
        path: file to read

    Returns:
        parsed document (must be an object)
    """
    try:
        with open(path, "r") as instance_file:
            document = json.load(instance_file)
    except OSError as e:
        raise InstanceFileException(f"Cannot read {path}: {e}")
    except json.decoder.JSONDecodeError as e:
        raise InstanceFileException(f"Error while decoding {path}: {e}")
    if not isinstance(document, dict):
        raise InstanceFileException(f"{path} does not contain a JSON object")
    return document


def write_text(path: str, text: str) -> None:
    """Writes text atomically (temporary file in the same directory, then rename)"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as tmp_file:
            tmp_file.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_json(path: str, document: Dict[str, Any]) -> None:
    write_text(path, json.dumps(document, indent=2, sort_keys=True) + "\n")
