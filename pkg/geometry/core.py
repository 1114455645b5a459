"""Contains exact rational planar primitives, predicates, duality and validation"""
import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from util.const import SHEAR_MAX_K

Rational = Fraction
RationalLike = Union[int, str, Fraction]


class VerticalLineException(Exception):
    """Thrown if a line would be vertical (see generic_shear)"""

    pass


class ParallelLinesException(Exception):
    """Thrown if two lines have no crossing"""

    pass


class GeneralPositionException(Exception):
    """Thrown if a point set violates general position"""

    pass


class DegenerateArrangementException(Exception):
    """Thrown if a line set is not a simple arrangement"""

    pass


class PointOnLineException(Exception):
    """Thrown if a point lies on a line where strictness is required"""

    pass


def to_rational(value: RationalLike) -> Fraction:
    """
    Converts integers, "p/q" strings and Fractions to a canonical Fraction.
    Floats are refused, coordinates are exact or nothing.
    """
    if isinstance(value, float):
        raise TypeError(f"Float {value} refused, use an integer or 'p/q' text")
    return Fraction(value)


class Orientation(enum.Enum):
    CCW = 1
    COLLINEAR = 0
    CW = -1


class Side(enum.Enum):
    ABOVE = "above"
    ON = "on"
    BELOW = "below"


class Direction(enum.Enum):
    RIGHTWARD = "rightward"
    LEFTWARD = "leftward"

    def reversed(self) -> "Direction":
        return Direction.LEFTWARD if self == Direction.RIGHTWARD else Direction.RIGHTWARD


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_rational(self.x))
        object.__setattr__(self, "y", to_rational(self.y))

    def reflected(self) -> "Point":
        """Image under y -> -y"""
        return Point(self.x, -self.y)

    def __repr__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class DirectedLine:
    """
    Non-vertical line y = slope * x + intercept with a direction.
    Read as a half-plane, a directed line bounds the open region on its
    right-hand side: below it when rightward, above it when leftward.
    """

    slope: Fraction
    intercept: Fraction
    direction: Direction = Direction.RIGHTWARD

    def __post_init__(self):
        object.__setattr__(self, "slope", to_rational(self.slope))
        object.__setattr__(self, "intercept", to_rational(self.intercept))

    @classmethod
    def through(cls, p: Point, q: Point) -> "DirectedLine":
        """
        Line through p and q, directed from p towards q
        Raises:
            VerticalLineException: p and q share their x-coordinate
        """
        if p.x == q.x:
            raise VerticalLineException(
                f"Line through {p} and {q} is vertical; apply generic_shear first."
            )
        slope = (q.y - p.y) / (q.x - p.x)
        direction = Direction.RIGHTWARD if q.x > p.x else Direction.LEFTWARD
        return cls(slope, p.y - slope * p.x, direction)

    def value_at(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def crossing(self, other: "DirectedLine") -> Point:
        if self.slope == other.slope:
            raise ParallelLinesException(f"{self} and {other} are parallel")
        x = (other.intercept - self.intercept) / (self.slope - other.slope)
        return Point(x, self.value_at(x))

    def reversed(self) -> "DirectedLine":
        return DirectedLine(self.slope, self.intercept, self.direction.reversed())

    def reflected(self) -> "DirectedLine":
        """
        Image under y -> -y. The direction is reversed as well, so the
        right-hand half-plane maps onto the right-hand half-plane.
        """
        return DirectedLine(-self.slope, -self.intercept, self.direction.reversed())

    def strictly_right(self, p: Point) -> bool:
        side = side_of_line(p, self)
        if self.direction == Direction.RIGHTWARD:
            return side == Side.BELOW
        return side == Side.ABOVE

    def __repr__(self):
        return f"<y = {self.slope}*x + {self.intercept} ({self.direction.value})>"


@dataclass(frozen=True)
class PointSet:
    points: Tuple[Point, ...]
    label: str = ""

    def __post_init__(self):
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        if len(set(points)) != len(points):
            raise GeneralPositionException(f"Point set [{self.label}] has duplicate points")

    @classmethod
    def of(cls, coordinates: Iterable[Tuple[RationalLike, RationalLike]], label: str = ""):
        return cls(tuple(Point(x, y) for x, y in coordinates), label)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.points)) - 1

    def subset(self, mask: int) -> List[Point]:
        return [p for i, p in enumerate(self.points) if mask >> i & 1]

    def reflected(self) -> "PointSet":
        return PointSet(tuple(p.reflected() for p in self.points), self.label)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, index: int) -> Point:
        return self.points[index]

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)


@dataclass(frozen=True)
class Hull:
    """Counterclockwise strictly convex vertex cycle, starting at the lexicographic minimum"""

    vertices: Tuple[int, ...]
    points: Tuple[Point, ...]

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    @property
    def kind(self) -> str:
        return {0: "empty", 1: "point", 2: "segment"}.get(len(self.vertices), "polygon")

    def edges(self) -> List[Tuple[Point, Point]]:
        if len(self.points) < 2:
            return []
        if len(self.points) == 2:
            return [(self.points[0], self.points[1])]
        return [
            (self.points[i], self.points[(i + 1) % len(self.points)])
            for i in range(len(self.points))
        ]


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if det > 0:
        return Orientation.CCW
    if det < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def side_of_line(p: Point, line: DirectedLine) -> Side:
    value = line.value_at(p.x)
    if p.y > value:
        return Side.ABOVE
    if p.y < value:
        return Side.BELOW
    return Side.ON


def dualize_point(p: Point) -> DirectedLine:
    """(a, b) -> y = a*x - b"""
    return DirectedLine(p.x, -p.y)


def dualize_line(line: DirectedLine) -> Point:
    """y = c*x + d -> (c, -d)"""
    return Point(line.slope, -line.intercept)


def _monotone_chain(points: Sequence[Point], indices: Iterable[int]) -> List[int]:
    order = sorted(set(indices), key=lambda i: points[i])
    if len(order) <= 2:
        return order
    lower: List[int] = []
    for i in order:
        while (
            len(lower) >= 2
            and orientation(points[lower[-2]], points[lower[-1]], points[i])
            != Orientation.CCW
        ):
            lower.pop()
        lower.append(i)
    upper: List[int] = []
    for i in reversed(order):
        while (
            len(upper) >= 2
            and orientation(points[upper[-2]], points[upper[-1]], points[i])
            != Orientation.CCW
        ):
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def convex_hull(s: PointSet, mask: Optional[int] = None) -> Hull:
    """
    Convex hull of a point set, or of the subset selected by mask
    Args:
        s: ambient point set
        mask: optional subset bitmask, all points when omitted

    Returns:
        hull with vertex indices into s
    """
    if mask is None:
        indices: Iterable[int] = range(len(s))
    else:
        indices = [i for i in range(len(s)) if mask >> i & 1]
    vertices = _monotone_chain(s.points, indices)
    if len(vertices) == 0:
        raise ValueError("Convex hull of an empty set is undefined")
    return Hull(tuple(vertices), tuple(s[i] for i in vertices))


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    return (
        orientation(a, b, p) == Orientation.COLLINEAR
        and min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments [a, b] and [c, d] share a point"""
    o1, o2 = orientation(a, b, c), orientation(a, b, d)
    o3, o4 = orientation(c, d, a), orientation(c, d, b)
    if (
        o1 != o2
        and o3 != o4
        and Orientation.COLLINEAR not in (o1, o2, o3, o4)
    ):
        return True
    return (
        _on_segment(a, b, c)
        or _on_segment(a, b, d)
        or _on_segment(c, d, a)
        or _on_segment(c, d, b)
    )


def hull_contains(hull: Hull, p: Point) -> bool:
    """Closed containment of p in the hull (points and segments included)"""
    if len(hull.points) == 1:
        return hull.points[0] == p
    if len(hull.points) == 2:
        return _on_segment(hull.points[0], hull.points[1], p)
    return all(orientation(a, b, p) != Orientation.CW for a, b in hull.edges())


def hulls_intersect(first: Hull, second: Hull) -> bool:
    """Closed convex hulls share a point"""
    if any(hull_contains(second, p) for p in first.points):
        return True
    if any(hull_contains(first, p) for p in second.points):
        return True
    return any(
        segments_intersect(a, b, c, d)
        for a, b in first.edges()
        for c, d in second.edges()
    )


@dataclass
class GeneralPositionReport:
    collinear_triples: List[Tuple[int, int, int]] = field(default_factory=list)
    duplicate_x: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def no_three_collinear(self) -> bool:
        return len(self.collinear_triples) == 0

    @property
    def passed(self) -> bool:
        return self.no_three_collinear and len(self.duplicate_x) == 0

    def __repr__(self):
        if self.passed:
            return "<GeneralPositionReport>(passed)"
        return (
            f"<GeneralPositionReport>(collinear: {self.collinear_triples}, "
            f"duplicate x: {self.duplicate_x})"
        )


def validate_general_position(p: PointSet) -> GeneralPositionReport:
    report = GeneralPositionReport()
    for i, j, k in combinations(range(len(p)), 3):
        if orientation(p[i], p[j], p[k]) == Orientation.COLLINEAR:
            report.collinear_triples.append((i, j, k))
    for i, j in combinations(range(len(p)), 2):
        if p[i].x == p[j].x:
            report.duplicate_x.append((i, j))
    return report


def require_general_position(p: PointSet, distinct_x: bool = True) -> None:
    """
    Raises:
        GeneralPositionException: with the first violation found
    """
    report = validate_general_position(p)
    if not report.no_three_collinear:
        i, j, k = report.collinear_triples[0]
        raise GeneralPositionException(
            f"Points {i}, {j}, {k} of [{p.label}] are collinear: {p[i]}, {p[j]}, {p[k]}"
        )
    if distinct_x and len(report.duplicate_x) > 0:
        i, j = report.duplicate_x[0]
        raise GeneralPositionException(
            f"Points {i} and {j} of [{p.label}] share x = {p[i].x}; apply generic_shear first."
        )


@dataclass
class ArrangementReport:
    parallel_pairs: List[Tuple[int, int]] = field(default_factory=list)
    concurrent_triples: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return len(self.parallel_pairs) == 0 and len(self.concurrent_triples) == 0

    def __repr__(self):
        if self.passed:
            return "<ArrangementReport>(passed)"
        return (
            f"<ArrangementReport>(parallel: {self.parallel_pairs}, "
            f"concurrent: {self.concurrent_triples})"
        )


def validate_simple_arrangement(lines: Sequence[DirectedLine]) -> ArrangementReport:
    # vertical lines cannot be constructed, so only parallelism and concurrency remain
    report = ArrangementReport()
    for i, j in combinations(range(len(lines)), 2):
        if lines[i].slope == lines[j].slope:
            report.parallel_pairs.append((i, j))
    for i, j, k in combinations(range(len(lines)), 3):
        if lines[i].slope == lines[j].slope:
            continue
        crossing = lines[i].crossing(lines[j])
        if side_of_line(crossing, lines[k]) == Side.ON:
            report.concurrent_triples.append((i, j, k))
    return report


def require_simple_arrangement(lines: Sequence[DirectedLine]) -> None:
    report = validate_simple_arrangement(lines)
    if not report.passed:
        raise DegenerateArrangementException(f"Not a simple arrangement: {report}")


@dataclass(frozen=True)
class ShearedConfiguration:
    points: PointSet
    lines: Tuple[DirectedLine, ...]
    t: Fraction


def shear_point(p: Point, t: Fraction) -> Point:
    return Point(p.x + t * p.y, p.y)


def shear_line(line: DirectedLine, t: Fraction) -> DirectedLine:
    """
    Image of a line under x' = x + t*y. Sides are preserved only while
    1 + t*slope > 0, so other values are refused.
    """
    denominator = 1 + t * line.slope
    if denominator <= 0:
        raise ValueError(f"Shear t={t} flips the sides of {line}")
    return DirectedLine(line.slope / denominator, line.intercept / denominator, line.direction)


def _shear(points: PointSet, lines: Sequence[DirectedLine], t: Fraction) -> ShearedConfiguration:
    return ShearedConfiguration(
        PointSet(tuple(shear_point(p, t) for p in points), points.label),
        tuple(shear_line(line, t) for line in lines),
        t,
    )


def _distinct_x(points: Iterable[Point]) -> bool:
    xs = [p.x for p in points]
    return len(set(xs)) == len(xs)


def generic_shear(
    points: PointSet,
    lines: Sequence[DirectedLine] = (),
    t: Optional[RationalLike] = None,
) -> ShearedConfiguration:
    """
    Applies x' = x + t*y to the points and the induced map to the lines.
    Without an explicit t, the first t = 1/k (k = 1, 2, ...) is chosen that
    gives all points distinct x-coordinates while preserving every side
    relation; a configuration that already has distinct x is returned with t = 0.
    Args:
        points: point set to transform
        lines: lines to transform consistently
        t: explicit shear parameter

    Returns:
        transformed configuration and the t used
    """
    if t is not None:
        return _shear(points, lines, to_rational(t))
    if _distinct_x(points):
        return _shear(points, lines, Fraction(0))
    for k in range(1, SHEAR_MAX_K + 1):
        candidate = Fraction(1, k)
        if any(1 + candidate * line.slope <= 0 for line in lines):
            continue
        if _distinct_x(shear_point(p, candidate) for p in points):
            return _shear(points, lines, candidate)
    raise GeneralPositionException(f"No shear t = 1/k with k <= {SHEAR_MAX_K} found")


@dataclass(frozen=True)
class LineSet:
    lines: Tuple[DirectedLine, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    @classmethod
    def of(cls, coefficients: Iterable[Tuple[RationalLike, RationalLike]], label: str = ""):
        return cls(tuple(DirectedLine(a, b) for a, b in coefficients), label)

    def reflected(self) -> "LineSet":
        return LineSet(tuple(line.reflected() for line in self.lines), self.label)

    def __len__(self):
        return len(self.lines)

    def __getitem__(self, index: int) -> DirectedLine:
        return self.lines[index]

    def __iter__(self) -> Iterator[DirectedLine]:
        return iter(self.lines)
