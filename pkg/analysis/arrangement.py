"""Contains exact line arrangements, face location and longest x-monotone paths"""
import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from geometry.core import (
    DirectedLine,
    Point,
    PointOnLineException,
    PointSet,
    Side,
    convex_hull,
    require_simple_arrangement,
    side_of_line,
)
from geometry.fileio import (
    InstanceFileException,
    optional_rational_from_json,
    optional_rational_to_json,
    point_from_json,
    point_to_json,
)

VertexKey = Tuple[int, int]


class UnboundedFaceException(Exception):
    """
    Thrown if the extremes of an unbounded face are requested
    """

    pass


def vertex_key(i: int, j: int) -> VertexKey:
    return (i, j) if i < j else (j, i)


def other_line(key: VertexKey, line: int) -> int:
    return key[1] if key[0] == line else key[0]


@dataclass
class Arrangement:
    lines: Tuple[DirectedLine, ...]
    vertices: Dict[VertexKey, Point]
    # crossings of every line, sorted by x
    per_line_order: Tuple[Tuple[VertexKey, ...], ...]
    _successor: Dict[Tuple[int, VertexKey], Optional[VertexKey]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        self._successor = {}
        for line, order in enumerate(self.per_line_order):
            for position, key in enumerate(order):
                following = order[position + 1] if position + 1 < len(order) else None
                self._successor[(line, key)] = following

    def __len__(self):
        return len(self.lines)

    def first_vertex(self, line: int) -> Optional[VertexKey]:
        order = self.per_line_order[line]
        return order[0] if len(order) > 0 else None

    def next_vertex(self, line: int, key: VertexKey) -> Optional[VertexKey]:
        """Crossing after key along line, None when the line leaves towards +inf"""
        return self._successor[(line, key)]


def build_arrangement(lines: Sequence[DirectedLine]) -> Arrangement:
    """
    Computes all pairwise crossings of a simple arrangement
    Args:
        lines: non-vertical lines, pairwise non-parallel, no three concurrent

    Returns:
        arrangement with its C(n,2) vertices
    """
    lines = tuple(lines)
    require_simple_arrangement(lines)
    vertices: Dict[VertexKey, Point] = {}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            vertices[(i, j)] = lines[i].crossing(lines[j])
    per_line_order = tuple(
        tuple(sorted((key for key in vertices if line in key), key=lambda k: vertices[k].x))
        for line in range(len(lines))
    )
    return Arrangement(lines, vertices, per_line_order)


def reflect_arrangement(arrangement: Arrangement) -> Arrangement:
    """Image under y -> -y, line indices kept"""
    return build_arrangement([line.reflected() for line in arrangement.lines])


class BendDirection(enum.Enum):
    UP = "up"
    DOWN = "down"

    def swapped(self) -> "BendDirection":
        return BendDirection.UP if self == BendDirection.DOWN else BendDirection.DOWN


def bend_direction(incoming: DirectedLine, outgoing: DirectedLine) -> BendDirection:
    return BendDirection.DOWN if outgoing.slope < incoming.slope else BendDirection.UP


@dataclass(frozen=True)
class PathSegment:
    line: int
    # None stands for -inf / +inf
    start: Optional[Fraction]
    end: Optional[Fraction]


@dataclass(frozen=True)
class Bend:
    vertex: Point
    incoming: int
    outgoing: int
    direction: BendDirection


@dataclass
class MonotonePath:
    segments: List[PathSegment]
    bends: List[Bend]

    def down_bends(self) -> List[int]:
        """Positions of the downward bends"""
        return [i for i, bend in enumerate(self.bends) if bend.direction == BendDirection.DOWN]

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "path",
            "segments": [
                [s.line, optional_rational_to_json(s.start), optional_rational_to_json(s.end)]
                for s in self.segments
            ],
            "bends": [
                {
                    "vertex": point_to_json(b.vertex),
                    "incoming": b.incoming,
                    "outgoing": b.outgoing,
                    "direction": b.direction.value,
                }
                for b in self.bends
            ],
        }

    @classmethod
    def from_json(cls, path_json: Dict[str, Any]) -> "MonotonePath":
        try:
            segments = [
                PathSegment(
                    int(line),
                    optional_rational_from_json(start),
                    optional_rational_from_json(end),
                )
                for line, start, end in path_json["segments"]
            ]
            bends = [
                Bend(
                    point_from_json(b["vertex"]),
                    int(b["incoming"]),
                    int(b["outgoing"]),
                    BendDirection(b["direction"]),
                )
                for b in path_json.get("bends", [])
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise InstanceFileException(f"Malformed path: {e}")
        return cls(segments, bends)


def reflect_path(path: MonotonePath) -> MonotonePath:
    """Image under y -> -y, matching reflect_arrangement; bend directions swap"""
    return MonotonePath(
        list(path.segments),
        [
            Bend(b.vertex.reflected(), b.incoming, b.outgoing, b.direction.swapped())
            for b in path.bends
        ],
    )


def path_length(path: MonotonePath) -> int:
    """Number of maximal single-line runs; going straight through a vertex adds nothing"""
    length = 0
    previous = None
    for segment in path.segments:
        if segment.line != previous:
            length += 1
        previous = segment.line
    return length


@dataclass(frozen=True)
class _Best:
    value: int
    bends: Tuple[Point, ...]
    turn: bool


_State = Tuple[VertexKey, int]


def _state_graph(arrangement: Arrangement) -> nx.DiGraph:
    graph = nx.DiGraph()
    for key in arrangement.vertices:
        for line in key:
            graph.add_node((key, line))
            for target_line in key:
                following = arrangement.next_vertex(target_line, key)
                if following is not None:
                    graph.add_edge((key, line), (following, target_line))
    return graph


def _solve(arrangement: Arrangement) -> Dict[_State, _Best]:
    # value of a state: bends still to come, its own turn included
    best: Dict[_State, _Best] = {}
    for state in reversed(list(nx.topological_sort(_state_graph(arrangement)))):
        key, line = state
        options = []
        for target_line in (line, other_line(key, line)):
            following = arrangement.next_vertex(target_line, key)
            if following is None:
                value, bends = 0, ()
            else:
                child = best[(following, target_line)]
                value, bends = child.value, child.bends
            turn = target_line != line
            if turn:
                value += 1
                bends = (arrangement.vertices[key],) + bends
            options.append(_Best(value, bends, turn))
        best[state] = min(options, key=lambda o: (-o.value, o.bends))
    return best


def longest_monotone_path(arrangement: Arrangement) -> MonotonePath:
    """
    Longest x-monotone path of the arrangement by dynamic programming over
    (vertex, arrival line) states. Among optimal paths the one with the
    lexicographically least bend sequence is returned.
    Args:
        arrangement: simple arrangement with at least one line

    Returns:
        bi-infinite optimal path with its bend records
    """
    n = len(arrangement)
    if n == 0:
        raise ValueError("Arrangement has no lines")
    if n == 1:
        return MonotonePath([PathSegment(0, None, None)], [])
    best = _solve(arrangement)

    def start_rank(line: int):
        choice = best[(arrangement.first_vertex(line), line)]
        return -choice.value, choice.bends, line

    line = min(range(n), key=start_rank)
    segments: List[PathSegment] = []
    bends: List[Bend] = []
    start: Optional[Fraction] = None
    key = arrangement.first_vertex(line)
    while key is not None:
        if best[(key, line)].turn:
            outgoing = other_line(key, line)
            vertex = arrangement.vertices[key]
            segments.append(PathSegment(line, start, vertex.x))
            bends.append(
                Bend(
                    vertex,
                    line,
                    outgoing,
                    bend_direction(arrangement.lines[line], arrangement.lines[outgoing]),
                )
            )
            line, start = outgoing, vertex.x
        key = arrangement.next_vertex(line, key)
    segments.append(PathSegment(line, start, None))
    return MonotonePath(segments, bends)


def exhaustive_longest_path_length(arrangement: Arrangement) -> int:
    """
    Oracle: tries every sequence of lines whose consecutive crossings have
    strictly increasing x. Exponential, only meant for a handful of lines.
    """
    n = len(arrangement)
    if n == 0:
        return 0

    def extend(line: int, x: Optional[Fraction]) -> int:
        longest = 1
        for other in range(n):
            if other == line:
                continue
            crossing = arrangement.vertices[vertex_key(line, other)]
            if x is None or crossing.x > x:
                longest = max(longest, 1 + extend(other, crossing.x))
        return longest

    return max(extend(line, None) for line in range(n))


def verify_monotone_path(path: MonotonePath, arrangement: Arrangement) -> bool:
    """
    Checks that the path is a valid x-monotone path in the arrangement:
    increasing x-intervals, changes of line only at the true crossing of the
    two lines with correctly labelled bends, no vertex used twice
    """
    segments = path.segments
    if len(segments) == 0 or len(path.bends) != len(segments) - 1:
        return False
    for segment in segments:
        if not 0 <= segment.line < len(arrangement):
            return False
        if segment.start is not None and segment.end is not None and segment.start >= segment.end:
            return False
    if any(s.start is None for s in segments[1:]) or any(s.end is None for s in segments[:-1]):
        return False
    used = set()
    for before, after, bend in zip(segments, segments[1:], path.bends):
        if before.line == after.line or before.end != after.start:
            return False
        key = vertex_key(before.line, after.line)
        vertex = arrangement.vertices[key]
        if bend.vertex != vertex or vertex.x != before.end:
            return False
        if (bend.incoming, bend.outgoing) != (before.line, after.line):
            return False
        expected = bend_direction(arrangement.lines[before.line], arrangement.lines[after.line])
        if bend.direction != expected or key in used:
            return False
        used.add(key)
    return True


@dataclass
class UpperChain:
    vertices: List[VertexKey]
    points: List[Point]
    # lines[i] carries the edge from points[i] to points[i + 1]
    lines: List[int]


@dataclass
class Face:
    """Cell of the arrangement given by the side of every line"""

    signs: Tuple[Side, ...]
    # counterclockwise, starting at the leftmost vertex
    vertices: List[VertexKey]
    points: List[Point]
    bounded: bool

    @property
    def constraints(self) -> List[Tuple[int, Side]]:
        return list(enumerate(self.signs))

    def upper_chain(self) -> UpperChain:
        """Vertices and edge lines of the upper boundary, leftmost vertex to rightmost"""
        if not self.bounded:
            raise UnboundedFaceException("Upper chain of an unbounded face requested")
        rightmost = self.points.index(max(self.points))
        keys = list(reversed(self.vertices[rightmost:] + self.vertices[:1]))
        points = list(reversed(self.points[rightmost:] + self.points[:1]))
        lines = [(set(u) & set(w)).pop() for u, w in zip(keys, keys[1:])]
        return UpperChain(keys, points, lines)


def _is_bounded(signs: Sequence[Side], lines: Sequence[DirectedLine]) -> bool:
    # the face recedes to infinity iff some direction respects every constraint
    above = [line.slope for line, side in zip(lines, signs) if side == Side.ABOVE]
    below = [line.slope for line, side in zip(lines, signs) if side == Side.BELOW]
    if len(above) == 0 or len(below) == 0:
        return False
    return not (max(above) < min(below) or max(below) < min(above))


def locate_face(q: Point, arrangement: Arrangement) -> Face:
    """
    Face of the arrangement containing q
    Raises:
        PointOnLineException: q lies on a line of the arrangement
    """
    signs = tuple(side_of_line(q, line) for line in arrangement.lines)
    if Side.ON in signs:
        line = signs.index(Side.ON)
        raise PointOnLineException(f"{q} lies on line {line} {arrangement.lines[line]}")
    keys = [
        key
        for key, vertex in arrangement.vertices.items()
        if all(
            side_of_line(vertex, line) == signs[k]
            for k, line in enumerate(arrangement.lines)
            if k not in key
        )
    ]
    bounded = _is_bounded(signs, arrangement.lines)
    if len(keys) == 0:
        return Face(signs, [], [], bounded)
    hull = convex_hull(PointSet(tuple(arrangement.vertices[key] for key in keys)))
    ordered = [keys[i] for i in hull.vertices]
    return Face(signs, ordered, [arrangement.vertices[key] for key in ordered], bounded)


def face_extremes(face: Face) -> Tuple[Point, Point]:
    """
    Leftmost and rightmost vertex of a bounded face
    Raises:
        UnboundedFaceException: the face is unbounded
    """
    if not face.bounded:
        raise UnboundedFaceException(f"Face with signs {[s.value for s in face.signs]} is unbounded")
    return min(face.points), max(face.points)
