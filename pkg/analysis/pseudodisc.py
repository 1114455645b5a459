"""
Contains checks for families of convex pseudo-discs: connectivity of hull
differences, tangency classes, common tangents, the rank system bounding the
family size, and the three-ray family meeting that bound up to a constant
"""
import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from analysis.linalg import bareiss_rank
from analysis.separable import SubsetFamily, verify_antichain
from geometry.core import (
    GeneralPositionException,
    Hull,
    Orientation,
    Point,
    PointSet,
    convex_hull,
    hull_contains,
    orientation,
    require_general_position,
)
from util.const import THREE_RAY_DIRECTIONS, THREE_RAY_PERTURBATION_FACTOR, DEFAULT_MAX_RETRIES
from util.helpers import CustomLogger, indices_of, is_subset, mask_of


class NestedMembersException(Exception):
    """Thrown if common tangents are requested for two nested members"""

    pass


class ConstructionFailedException(Exception):
    """Thrown if the three-ray construction does not verify after all retries"""

    pass


class PseudoDiscFamily(SubsetFamily):
    """Members are non-empty subsets of the ambient set, compared by their hulls"""

    @classmethod
    def of(cls, family: SubsetFamily) -> "PseudoDiscFamily":
        """Drops the empty set, which has no hull"""
        return cls(family.ambient, [member for member in family.members if member != 0])


class TangencyClass(enum.Enum):
    IN_LX = "in-lx"
    IN_LY = "in-ly"
    IN_LXY = "in-lxy"
    NOT_TANGENT_LEFT = "not-tangent-left"


@dataclass(frozen=True, order=True)
class ChordLine:
    """Directed line from ambient point tail to ambient point head"""

    tail: int
    head: int

    def __post_init__(self):
        if self.tail == self.head:
            raise ValueError(f"Chord line needs two distinct points, got {self.tail} twice")


def _cross(origin: Point, a: Point, b: Point) -> Fraction:
    return (a.x - origin.x) * (b.y - origin.y) - (a.y - origin.y) * (b.x - origin.x)


def _dot(origin: Point, a: Point, b: Point) -> Fraction:
    return (a.x - origin.x) * (b.x - origin.x) + (a.y - origin.y) * (b.y - origin.y)


def _clip(u: Point, w: Point, hull: Hull) -> Optional[Tuple[Fraction, Fraction]]:
    """
    Parameter interval [t0, t1] of the part of segment u -> w inside the
    closed hull, None if they do not meet
    """
    if len(hull.points) == 1:
        c = hull.points[0]
        if orientation(u, w, c) != Orientation.COLLINEAR:
            return None
        t = _dot(u, w, c) / _dot(u, w, w)
        return (t, t) if 0 <= t <= 1 else None
    if len(hull.points) == 2:
        c, d = hull.points
        direction = Point(w.x - u.x + c.x, w.y - u.y + c.y)
        denominator = _cross(c, d, direction)
        if denominator == 0:
            if orientation(u, w, c) != Orientation.COLLINEAR:
                return None
            tc, td = _dot(u, w, c) / _dot(u, w, w), _dot(u, w, d) / _dot(u, w, w)
            low, high = max(Fraction(0), min(tc, td)), min(Fraction(1), max(tc, td))
            return (low, high) if low <= high else None
        # u + t(w - u) on the line through c and d
        t = -_cross(c, d, u) / denominator
        if not 0 <= t <= 1:
            return None
        crossing = Point(u.x + t * (w.x - u.x), u.y + t * (w.y - u.y))
        if not hull_contains(hull, crossing):
            return None
        return t, t
    low, high = Fraction(0), Fraction(1)
    for a, b in hull.edges():
        start = _cross(a, b, u)
        slope = _cross(a, b, w) - start
        if slope == 0:
            if start < 0:
                return None
        elif slope > 0:
            low = max(low, -start / slope)
        else:
            high = min(high, -start / slope)
        if low > high:
            return None
    return low, high


def _boundary_edges(hull: Hull) -> List[Tuple[Point, Point]]:
    # a segment is its own boundary, walked there and back
    if len(hull.points) == 2:
        u, w = hull.points
        return [(u, w), (w, u)]
    return hull.edges()


def region_components(a: int, b: int, p: PointSet) -> int:
    """
    Number of connected components of conv(a) minus conv(b), counted as the
    maximal arcs of the boundary of conv(a) lying outside conv(b)
    Args:
        a: non-empty subset bitmask
        b: non-empty subset bitmask
        p: ambient point set

    Returns:
        0 if conv(a) lies inside conv(b), otherwise the number of components
    """
    if a == 0 or b == 0:
        raise ValueError("Region components need two non-empty sets")
    hull_a, hull_b = convex_hull(p, a), convex_hull(p, b)
    if all(hull_contains(hull_b, vertex) for vertex in hull_a.points):
        return 0
    if len(hull_a.points) == 1:
        return 1
    edges = _boundary_edges(hull_a)
    inside = []
    for position, (u, w) in enumerate(edges):
        interval = _clip(u, w, hull_b)
        if interval is not None:
            inside.append((position + interval[0], position + interval[1]))
    if len(inside) == 0:
        return 1
    inside.sort()
    merged = [list(inside[0])]
    for start, end in inside[1:]:
        if start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    gaps = len(merged) - 1
    if merged[-1][1] < len(edges) or merged[0][0] > 0:
        gaps += 1
    return max(gaps, 1)


@dataclass
class PseudoDiscReport:
    empty_members: List[int] = field(default_factory=list)
    # member positions with a point of the ambient set in conv(member) but not in member
    not_convexly_cut: List[int] = field(default_factory=list)
    # (i, j, components of conv(A_i) minus conv(A_j))
    disconnected_pairs: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            len(self.empty_members) == 0
            and len(self.not_convexly_cut) == 0
            and len(self.disconnected_pairs) == 0
        )

    def __repr__(self):
        if self.passed:
            return "<PseudoDiscReport>(passed)"
        return (
            f"<PseudoDiscReport>(empty: {self.empty_members}, "
            f"not convexly cut: {self.not_convexly_cut}, "
            f"disconnected: {self.disconnected_pairs})"
        )


def verify_pseudodisc_family(family: SubsetFamily) -> PseudoDiscReport:
    report = PseudoDiscReport()
    p = family.ambient
    for position, member in enumerate(family.members):
        if member == 0:
            report.empty_members.append(position)
            continue
        hull = convex_hull(p, member)
        if any(
            not member >> i & 1 and hull_contains(hull, point) for i, point in enumerate(p)
        ):
            report.not_convexly_cut.append(position)
    for i, a in enumerate(family.members):
        for j, b in enumerate(family.members):
            if i == j or a == 0 or b == 0:
                continue
            components = region_components(a, b, p)
            if components > 1:
                report.disconnected_pairs.append((i, j, components))
    return report


def classify_tangency(line: ChordLine, a: int, p: PointSet) -> TangencyClass:
    """
    Class of member a for the directed line through p[line.tail] and p[line.head]
    """
    x, y = p[line.tail], p[line.head]
    members = p.subset(a)
    if len(members) == 0 or any(orientation(x, y, point) == Orientation.CW for point in members):
        return TangencyClass.NOT_TANGENT_LEFT
    has_x, has_y = bool(a >> line.tail & 1), bool(a >> line.head & 1)
    if has_x and has_y:
        return TangencyClass.IN_LXY
    if has_x:
        return TangencyClass.IN_LX
    if has_y:
        return TangencyClass.IN_LY
    return TangencyClass.NOT_TANGENT_LEFT


@dataclass
class TangentReport:
    first_kind: List[ChordLine]
    second_kind: List[ChordLine]

    @property
    def weight(self) -> Fraction:
        return len(self.first_kind) + Fraction(len(self.second_kind), 2)

    @property
    def tangent_case(self) -> Optional[int]:
        """1 for one tangent of the first kind, 2 for two of the second kind, None otherwise"""
        if (len(self.first_kind), len(self.second_kind)) == (1, 0):
            return 1
        if (len(self.first_kind), len(self.second_kind)) == (0, 2):
            return 2
        return None


def _all_chord_lines(p: PointSet) -> List[ChordLine]:
    return [ChordLine(i, j) for i in range(len(p)) for j in range(len(p)) if i != j]


def _hull_chord_lines(a: int, b: int, p: PointSet) -> List[ChordLine]:
    # only lines through consecutive vertices of conv(a | b) can be common tangents
    vertices = convex_hull(p, a | b).vertices
    if len(vertices) == 1:
        return []
    if len(vertices) == 2:
        return [ChordLine(vertices[0], vertices[1]), ChordLine(vertices[1], vertices[0])]
    return [
        ChordLine(vertices[i], vertices[(i + 1) % len(vertices)]) for i in range(len(vertices))
    ]


def common_tangents(a: int, b: int, p: PointSet, exhaustive: bool = False) -> TangentReport:
    """
    Common tangents of the first and second kind for the ordered pair (a, b)
    Args:
        a: subset bitmask
        b: subset bitmask, neither containing the other
        p: ambient point set
        exhaustive: try every directed line through two ambient points
            instead of the hull edges of conv(a | b)

    Returns:
        tangents of both kinds
    """
    if is_subset(a, b) or is_subset(b, a):
        raise NestedMembersException(f"Members {indices_of(a)} and {indices_of(b)} are nested")
    first, second = [], []
    candidates = _all_chord_lines(p) if exhaustive else _hull_chord_lines(a, b, p)
    for line in candidates:
        class_a, class_b = classify_tangency(line, a, p), classify_tangency(line, b, p)
        if class_a == TangencyClass.IN_LX and class_b == TangencyClass.IN_LY:
            first.append(line)
        elif (class_a, class_b) in (
            (TangencyClass.IN_LXY, TangencyClass.IN_LY),
            (TangencyClass.IN_LX, TangencyClass.IN_LXY),
        ):
            second.append(line)
    return TangentReport(sorted(first), sorted(second))


def tangent_weight(a: int, b: int, p: PointSet, exhaustive: bool = False) -> Fraction:
    """Tangents of the first kind plus half the tangents of the second kind"""
    return common_tangents(a, b, p, exhaustive).weight


def hull_arcs_contiguous(a: int, b: int, p: PointSet) -> bool:
    """
    Whether the vertices of conv(a | b) belonging to a only, and those
    belonging to b only, each form one contiguous cyclic run
    """
    vertices = convex_hull(p, a | b).vertices

    def contiguous(selected: List[bool]) -> bool:
        starts = sum(
            1 for i in range(len(selected)) if selected[i] and not selected[i - 1]
        )
        return starts <= 1

    only_a = [bool(a >> v & 1) and not b >> v & 1 for v in vertices]
    only_b = [bool(b >> v & 1) and not a >> v & 1 for v in vertices]
    return contiguous(only_a) and contiguous(only_b)


def _class_table(family: SubsetFamily) -> Dict[ChordLine, Dict[TangencyClass, List[int]]]:
    table = {}
    for line in _all_chord_lines(family.ambient):
        classes: Dict[TangencyClass, List[int]] = {c: [] for c in TangencyClass}
        for position, member in enumerate(family.members):
            classes[classify_tangency(line, member, family.ambient)].append(position)
        table[line] = classes
    return table


@dataclass
class TverbergSystem:
    matrix: List[List[int]]
    # (tail, head, "x" or "y") for the line rows, None for the all-ones row
    row_labels: List[Optional[Tuple[int, int, str]]]
    column_labels: List[int]

    def to_text(self) -> str:
        """One row per line, entries separated by single spaces"""
        return "".join(" ".join(str(entry) for entry in row) + "\n" for row in self.matrix)


def _system_from_table(family: SubsetFamily, table) -> TverbergSystem:
    matrix, labels = [], []
    for line in sorted(table):
        for selector, tangency in (("x", TangencyClass.IN_LX), ("y", TangencyClass.IN_LY)):
            row = [0] * len(family.members)
            for position in table[line][tangency]:
                row[position] = 1
            matrix.append(row)
            labels.append((line.tail, line.head, selector))
    matrix.append([1] * len(family.members))
    labels.append(None)
    return TverbergSystem(matrix, labels, list(family.members))


def build_tverberg_system(family: SubsetFamily) -> TverbergSystem:
    """
    Rows: for every directed line through two ambient points, the members
    touching it at its tail only, then at its head only; last the all-ones row
    """
    return _system_from_table(family, _class_table(family))


def _coefficients_from_table(table) -> Dict[Tuple[int, int], Fraction]:
    coefficients: Dict[Tuple[int, int], Fraction] = {}

    def add(u: int, v: int, amount: Fraction):
        key = (min(u, v), max(u, v))
        coefficients[key] = coefficients.get(key, Fraction(0)) + amount

    for classes in table.values():
        for u in classes[TangencyClass.IN_LX]:
            for v in classes[TangencyClass.IN_LY]:
                add(u, v, Fraction(1))
            for v in classes[TangencyClass.IN_LXY]:
                add(u, v, Fraction(1, 2))
        for u in classes[TangencyClass.IN_LY]:
            for v in classes[TangencyClass.IN_LXY]:
                add(u, v, Fraction(1, 2))
    return coefficients


def tangent_polynomial_coefficients(family: SubsetFamily) -> Dict[Tuple[int, int], Fraction]:
    """
    Coefficients of the sum over all directed lines L of
    X_L * Y_L + (X_L + Y_L) * XY_L / 2, where X_L, Y_L and XY_L sum the
    indeterminates of the members in each tangency class; keys (u, v) with u <= v
    """
    return _coefficients_from_table(_class_table(family))


def _ordered_weights(table, size: int) -> List[List[Fraction]]:
    weights = [[Fraction(0)] * size for _ in range(size)]
    for classes in table.values():
        for u in classes[TangencyClass.IN_LX]:
            for v in classes[TangencyClass.IN_LY]:
                weights[u][v] += 1
            for v in classes[TangencyClass.IN_LXY]:
                weights[u][v] += Fraction(1, 2)
        for u in classes[TangencyClass.IN_LXY]:
            for v in classes[TangencyClass.IN_LY]:
                weights[u][v] += Fraction(1, 2)
    return weights


@dataclass
class RankReport:
    members: int
    rows: int
    rank: int
    # ordered pairs whose tangent weight is not 1
    weight_violations: List[Tuple[int, int, Fraction]] = field(default_factory=list)
    # (u, v, coefficient) where the coefficient should be 2 (u < v) or 0 (u == v)
    coefficient_violations: List[Tuple[int, int, Fraction]] = field(default_factory=list)

    @property
    def full_rank(self) -> bool:
        return self.rank == self.members

    @property
    def within_bound(self) -> bool:
        return self.members <= self.rows

    @property
    def passed(self) -> bool:
        return (
            self.full_rank
            and self.within_bound
            and len(self.weight_violations) == 0
            and len(self.coefficient_violations) == 0
        )

    def __repr__(self):
        return (
            f"<RankReport>(members: {self.members}, rows: {self.rows}, rank: {self.rank}, "
            f"weight violations: {len(self.weight_violations)}, "
            f"coefficient violations: {len(self.coefficient_violations)})"
        )


def verify_rank_bound(family: SubsetFamily) -> RankReport:
    """
    Exact rank of the rank system, tangent weights of every ordered pair and
    the coefficient structure of the summed tangent polynomials
    Args:
        family: pseudo-disc antichain

    Returns:
        report; a failure means the family is not what it claims to be
    """
    if not verify_antichain(family.members):
        raise NestedMembersException("Rank bound needs an antichain")
    table = _class_table(family)
    system = _system_from_table(family, table)
    size = len(family.members)
    report = RankReport(size, len(system.matrix), bareiss_rank(system.matrix))

    weights = _ordered_weights(table, size)
    for u in range(size):
        for v in range(size):
            if u != v and weights[u][v] != 1:
                report.weight_violations.append((u, v, weights[u][v]))
    coefficients = _coefficients_from_table(table)
    # a member has one class per line, so a (u, u) term is structurally 0 and
    # only shows up if the class table is inconsistent
    for u in range(size):
        for v in range(u, size):
            expected = 0 if u == v else 2
            actual = coefficients.get((u, v), Fraction(0))
            if actual != expected:
                report.coefficient_violations.append((u, v, actual))
    return report


def _three_ray_family(n: int) -> List[int]:
    # point t (1-based) of ray r has index r * n + t - 1
    members = []
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            l = n + 2 - j - k
            if 1 <= l <= n:
                members.append(
                    mask_of(
                        list(range(j))
                        + [n + i for i in range(k)]
                        + [2 * n + i for i in range(l)]
                    )
                )
    return members


def three_ray_construction(
    n: int,
    seed: int,
    max_attempts: int = DEFAULT_MAX_RETRIES,
    logger: Optional[CustomLogger] = None,
) -> Tuple[PointSet, PseudoDiscFamily]:
    """
    3n points on three rays from the origin, slightly perturbed, and the
    C(n+1, 2) sets taking the first j, k and l points of the rays with
    j + k + l = n + 2
    Args:
        n: points per ray
        seed: seed of the perturbation
        max_attempts: perturbation retries, the offsets shrink by half each time
        logger: optional logger

    Returns:
        ambient point set and family, both verified
    """
    if n < 1:
        raise ValueError(f"Three-ray construction needs n >= 1, got {n}")
    rng = random.Random(seed)
    members = _three_ray_family(n)
    k = 1
    for attempt in range(max_attempts):
        scale = THREE_RAY_PERTURBATION_FACTOR * n * k
        points = []
        for dx, dy in THREE_RAY_DIRECTIONS:
            for t in range(1, n + 1):
                offset_x = Fraction(rng.randint(-scale, scale), scale * scale)
                offset_y = Fraction(rng.randint(-scale, scale), scale * scale)
                points.append(Point(t * dx + offset_x, t * dy + offset_y))
        try:
            ambient = PointSet(tuple(points), f"three-ray n={n}")
            require_general_position(ambient, distinct_x=False)
        except GeneralPositionException:
            k *= 2
            continue
        family = PseudoDiscFamily(ambient, members)
        if verify_antichain(members) and verify_pseudodisc_family(family).passed:
            if logger is not None:
                logger.debug(f"Three-ray points verified after {attempt + 1} attempt(s), offsets <= 1/{scale}")
            return ambient, family
        k *= 2
    raise ConstructionFailedException(
        f"Three-ray construction for n={n} did not verify after {max_attempts} attempts"
    )

