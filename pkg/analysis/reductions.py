"""
Contains the constructions between antichains of separable sets, strongly
separated line families, separated point sequences and monotone paths
"""
import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from analysis.arrangement import (
    Arrangement,
    MonotonePath,
    PathSegment,
    Bend,
    BendDirection,
    bend_direction,
    build_arrangement,
    locate_face,
    path_length,
    reflect_arrangement,
    reflect_path,
    verify_monotone_path,
    vertex_key,
)
from analysis.separable import is_separable, verify_antichain
from geometry.core import (
    DirectedLine,
    Direction,
    LineSet,
    Point,
    PointSet,
    Side,
    dualize_line,
    dualize_point,
    generic_shear,
    PointOnLineException,
    side_of_line,
    validate_simple_arrangement,
)
from geometry.fileio import (
    InstanceFileException,
    line_set_from_json,
    line_set_to_json,
    point_set_from_json,
    point_set_to_json,
)
from util.const import (
    DEFAULT_PERTURBATION_DENOMINATOR,
    PERTURBATION_MAX_ATTEMPTS,
    WEDGE_SEARCH_MAX_HALVINGS,
)
from util.helpers import CustomLogger, ceil_half, indices_of, mask_of


class InvalidAntichainException(Exception):
    """Thrown if a family handed to a reduction is not an antichain of separable sets"""

    pass


class UnsortedLinesException(Exception):
    """Thrown if lines are not strictly sorted by slope"""

    pass


class WedgeSearchException(Exception):
    """Thrown if no point of an open wedge region was found"""

    pass


class PerturbationException(Exception):
    """Thrown if no perturbation preserving separation was found"""

    pass


class SeparationFailedException(Exception):
    """Thrown if a construction does not yield the separation it promises"""

    pass


class ConfigurationRole(enum.Enum):
    POINTS_SEPARATE_LINES = "points-separate-lines"
    LINES_SEPARATE_POINTS = "lines-separate-points"

    def swapped(self) -> "ConfigurationRole":
        if self == ConfigurationRole.POINTS_SEPARATE_LINES:
            return ConfigurationRole.LINES_SEPARATE_POINTS
        return ConfigurationRole.POINTS_SEPARATE_LINES


@dataclass
class SeparatedConfiguration:
    # points sorted by x, lines sorted by slope
    points: PointSet
    lines: LineSet
    role: ConfigurationRole

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "configuration",
            "role": self.role.value,
            "points": point_set_to_json(self.points),
            "lines": line_set_to_json(self.lines),
        }

    @classmethod
    def from_json(cls, configuration_json: Dict[str, Any]) -> "SeparatedConfiguration":
        try:
            role = ConfigurationRole(configuration_json["role"])
            points = point_set_from_json(configuration_json["points"])
            lines = line_set_from_json(configuration_json["lines"])
        except (KeyError, ValueError) as e:
            raise InstanceFileException(f"Malformed configuration: {e}")
        return cls(points, lines, role)


def strongly_separates(x: Point, y: Point, l1: DirectedLine, l2: DirectedLine) -> bool:
    """
    x strictly above l1 and strictly below l2, y strictly above l2 and strictly below l1
    """
    return (
        side_of_line(x, l1) == Side.ABOVE
        and side_of_line(x, l2) == Side.BELOW
        and side_of_line(y, l2) == Side.ABOVE
        and side_of_line(y, l1) == Side.BELOW
    )


def pair_separates_pair(x: Point, y: Point, l1: DirectedLine, l2: DirectedLine) -> bool:
    """Unordered version: either assignment of the lines works"""
    return strongly_separates(x, y, l1, l2) or strongly_separates(x, y, l2, l1)


def points_separate_lines(points: Sequence[Point], l1: DirectedLine, l2: DirectedLine) -> bool:
    above_first = any(
        side_of_line(p, l1) == Side.ABOVE and side_of_line(p, l2) == Side.BELOW for p in points
    )
    above_second = any(
        side_of_line(p, l2) == Side.ABOVE and side_of_line(p, l1) == Side.BELOW for p in points
    )
    return above_first and above_second


def lines_separate_points(lines: Sequence[DirectedLine], p: Point, q: Point) -> bool:
    p_above = any(
        side_of_line(p, line) == Side.ABOVE and side_of_line(q, line) == Side.BELOW
        for line in lines
    )
    q_above = any(
        side_of_line(q, line) == Side.ABOVE and side_of_line(p, line) == Side.BELOW
        for line in lines
    )
    return p_above and q_above


def _require_sorted_by_slope(lines: Sequence[DirectedLine]) -> None:
    for i in range(len(lines) - 1):
        if lines[i].slope >= lines[i + 1].slope:
            raise UnsortedLinesException(
                f"Lines {i} and {i + 1} are not strictly sorted by slope: {lines[i]}, {lines[i + 1]}"
            )


def _require_sorted_by_x(points: Sequence[Point]) -> None:
    for i in range(len(points) - 1):
        if points[i].x >= points[i + 1].x:
            raise ValueError(
                f"Points {i} and {i + 1} are not strictly sorted by x: {points[i]}, {points[i + 1]}"
            )


def verify_separated_sequence(lines: Sequence[DirectedLine], points: Sequence[Point]) -> bool:
    """
    Checks only consecutive pairs of a slope-sorted line sequence; separation
    of every other pair follows from that
    Raises:
        UnsortedLinesException: lines are not strictly sorted by slope
    """
    _require_sorted_by_slope(lines)
    return all(
        points_separate_lines(points, lines[i], lines[i + 1]) for i in range(len(lines) - 1)
    )


def _off_all_lines(points: Sequence[Point], lines: Sequence[DirectedLine]) -> bool:
    return all(side_of_line(p, line) != Side.ON for p in points for line in lines)


def verify_configuration(config: SeparatedConfiguration) -> bool:
    """Consecutive separation for the claimed role, no point on a line"""
    if not _off_all_lines(config.points, config.lines):
        return False
    if config.role == ConfigurationRole.POINTS_SEPARATE_LINES:
        return verify_separated_sequence(config.lines, config.points)
    _require_sorted_by_x(config.points)
    return all(
        lines_separate_points(config.lines, config.points[i], config.points[i + 1])
        for i in range(len(config.points) - 1)
    )


def all_pairs_separated(config: SeparatedConfiguration) -> bool:
    """Oracle: every pair, not only consecutive ones"""
    if config.role == ConfigurationRole.POINTS_SEPARATE_LINES:
        return all(
            points_separate_lines(config.points, config.lines[i], config.lines[j])
            for i in range(len(config.lines))
            for j in range(i + 1, len(config.lines))
        )
    return all(
        lines_separate_points(config.lines, config.points[i], config.points[j])
        for i in range(len(config.points))
        for j in range(i + 1, len(config.points))
    )


def _sorted_configuration(
    points: Sequence[Point], lines: Sequence[DirectedLine], role: ConfigurationRole, label: str
) -> SeparatedConfiguration:
    return SeparatedConfiguration(
        PointSet(tuple(sorted(points)), label),
        LineSet(tuple(sorted(lines, key=lambda line: line.slope)), label),
        role,
    )


def antichain_to_lines(
    p: PointSet, antichain: Sequence[int], logger: Optional[CustomLogger] = None
) -> SeparatedConfiguration:
    """
    Turns an antichain of separable subsets into a family of lines that p
    strongly separates pairwise. Every member gets a witness half-plane; if
    fewer than half of them are lower half-planes the whole picture is
    reflected in the x-axis, then the upper ones are dropped.
    Args:
        p: ambient point set, no three points collinear
        antichain: subset bitmasks, neither empty nor all of p
        logger: optional logger for the normalisation decisions

    Returns:
        configuration with role points-separate-lines and at least
        ceil(|antichain| / 2) lines
    """
    if not verify_antichain(antichain):
        raise InvalidAntichainException("Members are not pairwise incomparable")
    if len(set(antichain)) != len(antichain):
        raise InvalidAntichainException("Members are not distinct")
    for member in antichain:
        if member <= 0 or member >= p.full_mask:
            raise InvalidAntichainException(f"Member {indices_of(member)} is trivial or out of range")

    # shared x-coordinates would force vertical witnesses; the configuration
    # is then built on the sheared copy, which has the same separable sets
    sheared = generic_shear(p)
    if sheared.t != 0 and logger is not None:
        logger.debug(f"Points sheared with t = {sheared.t} to find witnesses")
    witnesses = []
    for member in antichain:
        witness = is_separable(member, sheared.points)
        if witness is None:
            raise InvalidAntichainException(f"Member {indices_of(member)} is not linearly separable")
        witnesses.append(witness)

    below = [w for w in witnesses if w.direction == Direction.RIGHTWARD]
    above = [w for w in witnesses if w.direction == Direction.LEFTWARD]
    points = list(sheared.points)
    if len(below) < len(above):
        if logger is not None:
            logger.debug(f"{len(above)} of {len(witnesses)} witnesses are upper half-planes, reflecting")
        points = [point.reflected() for point in points]
        below = [w.reflected() for w in above]

    config = _sorted_configuration(
        points, below, ConfigurationRole.POINTS_SEPARATE_LINES, p.label
    )
    if not verify_configuration(config):
        raise SeparationFailedException("Witness lines of the antichain are not separated")
    return config


def lines_to_antichain(config: SeparatedConfiguration) -> List[int]:
    """
    One subset per line: the points strictly below it
    """
    if config.role != ConfigurationRole.POINTS_SEPARATE_LINES:
        raise ValueError(f"Configuration has role {config.role.value}, expected points-separate-lines")
    members = []
    for line in config.lines:
        sides = [side_of_line(point, line) for point in config.points]
        if Side.ON in sides:
            raise PointOnLineException(f"{config.points[sides.index(Side.ON)]} lies on {line}")
        members.append(mask_of(i for i, side in enumerate(sides) if side == Side.BELOW))
    return members


def dualize_configuration(config: SeparatedConfiguration) -> SeparatedConfiguration:
    """Points become lines and lines become points; separation is preserved pairwise"""
    return _sorted_configuration(
        [dualize_line(line) for line in config.lines],
        [dualize_point(point) for point in config.points],
        config.role.swapped(),
        config.points.label,
    )


class WedgeKind(enum.Enum):
    # left wedge: below the outgoing line, above the incoming one
    LEFT = "left"
    # right wedge: above the outgoing line, below the incoming one
    RIGHT = "right"


@dataclass(frozen=True)
class Wedge:
    """Open wedge at a downward bend between incoming line s and outgoing line r"""

    outgoing: DirectedLine
    incoming: DirectedLine
    kind: WedgeKind
    apex: Point

    def constraints(self) -> List[Tuple[DirectedLine, Side]]:
        if self.kind == WedgeKind.LEFT:
            return [(self.outgoing, Side.BELOW), (self.incoming, Side.ABOVE)]
        return [(self.outgoing, Side.ABOVE), (self.incoming, Side.BELOW)]

    def contains(self, p: Point) -> bool:
        return all(side_of_line(p, line) == side for line, side in self.constraints())


def wedges_for_path(path: MonotonePath, arrangement: Arrangement) -> List[Tuple[Wedge, Wedge]]:
    """Left and right wedge at every downward bend, in path order"""
    wedges = []
    for bend in path.bends:
        if bend.direction != BendDirection.DOWN:
            continue
        outgoing = arrangement.lines[bend.outgoing]
        incoming = arrangement.lines[bend.incoming]
        wedges.append(
            (
                Wedge(outgoing, incoming, WedgeKind.LEFT, bend.vertex),
                Wedge(outgoing, incoming, WedgeKind.RIGHT, bend.vertex),
            )
        )
    return wedges


def _search_region(
    anchor: Point,
    step: Tuple[Fraction, Fraction],
    constraints: List[Tuple[DirectedLine, Side]],
    lines: Sequence[DirectedLine],
) -> Point:
    # anchor + epsilon * step with epsilon = 1, 1/2, 1/4, ...
    epsilon = Fraction(1)
    for _ in range(WEDGE_SEARCH_MAX_HALVINGS):
        candidate = Point(anchor.x + epsilon * step[0], anchor.y + epsilon * step[1])
        if all(side_of_line(candidate, line) == side for line, side in constraints) and all(
            side_of_line(candidate, line) != Side.ON for line in lines
        ):
            return candidate
        epsilon /= 2
    raise WedgeSearchException(f"No point found near {anchor} after {WEDGE_SEARCH_MAX_HALVINGS} halvings")


def _wedge_points(path: MonotonePath, arrangement: Arrangement) -> List[Point]:
    down = path.down_bends()
    wedges = wedges_for_path(path, arrangement)
    lines = arrangement.lines
    first_left, _ = wedges[0]
    _, last_right = wedges[-1]
    first_bisector = (first_left.incoming.slope + first_left.outgoing.slope) / 2
    last_bisector = (last_right.incoming.slope + last_right.outgoing.slope) / 2

    points = [
        _search_region(
            first_left.apex, (Fraction(-1), -first_bisector), first_left.constraints(), lines
        )
    ]
    for j in range(len(wedges) - 1):
        _, right = wedges[j]
        left, _ = wedges[j + 1]
        constraints = right.constraints() + left.constraints()
        if down[j + 1] == down[j] + 1:
            # the two bends share a segment: go just above its midpoint
            anchor = Point((right.apex.x + left.apex.x) / 2, (right.apex.y + left.apex.y) / 2)
        else:
            anchor = right.outgoing.crossing(left.incoming)
        points.append(_search_region(anchor, (Fraction(0), Fraction(1)), constraints, lines))
    points.append(
        _search_region(last_right.apex, (Fraction(1), last_bisector), last_right.constraints(), lines)
    )
    return points


def path_to_points(
    path: MonotonePath, arrangement: Arrangement, logger: Optional[CustomLogger] = None
) -> SeparatedConfiguration:
    """
    Places one point before the first downward bend, one between each pair
    of consecutive downward bends and one after the last, so that the lines
    of the arrangement strongly separate every consecutive pair. A path with
    too few downward bends is reflected in the x-axis first; the points are
    reflected back afterwards, which keeps them separated.
    Args:
        path: valid monotone path in the arrangement
        arrangement: simple arrangement
        logger: optional logger for the normalisation decisions

    Returns:
        configuration with role lines-separate-points and at least
        ceil((length + 1) / 2) points
    """
    if not verify_monotone_path(path, arrangement):
        raise ValueError("Path is not a valid monotone path of the arrangement")
    length = path_length(path)
    working_path, working_arrangement = path, arrangement
    reflected = len(path.down_bends()) < ceil_half(length - 1)
    if reflected:
        if logger is not None:
            logger.debug(
                f"{len(path.down_bends())} of {len(path.bends)} bends go down, reflecting"
            )
        working_path = reflect_path(path)
        working_arrangement = reflect_arrangement(arrangement)

    if len(working_path.down_bends()) == 0:
        # a single point, vacuously separated
        top = max(line.intercept for line in arrangement.lines) + 1
        points = [Point(0, top)]
    else:
        points = _wedge_points(working_path, working_arrangement)
        if reflected:
            points = [point.reflected() for point in points]

    config = _sorted_configuration(
        points, arrangement.lines, ConfigurationRole.LINES_SEPARATE_POINTS, "path-points"
    )
    if not verify_configuration(config):
        raise SeparationFailedException("Points placed in the bend wedges are not separated")
    return config


def _in_general_position(config: SeparatedConfiguration) -> bool:
    return validate_simple_arrangement(config.lines).passed and _off_all_lines(
        config.points, config.lines
    )


def perturb_configuration(
    config: SeparatedConfiguration,
    seed: int,
    logger: Optional[CustomLogger] = None,
    start_k: int = DEFAULT_PERTURBATION_DENOMINATOR,
) -> SeparatedConfiguration:
    """
    Moves every line by exact rational offsets of magnitude at most 1/k,
    doubling k until the lines form a simple arrangement avoiding all points
    and the configuration still verifies
    Args:
        config: configuration to perturb
        seed: seed of the offsets
        logger: optional logger
        start_k: denominator of the first attempt

    Returns:
        perturbed configuration
    """
    rng = random.Random(seed)
    if start_k < 1:
        raise ValueError(f"Perturbation denominator must be positive, got {start_k}")
    k = start_k
    for attempt in range(PERTURBATION_MAX_ATTEMPTS):
        lines = [
            DirectedLine(
                line.slope + Fraction(rng.randint(-k, k), k * k),
                line.intercept + Fraction(rng.randint(-k, k), k * k),
                line.direction,
            )
            for line in config.lines
        ]
        candidate = _sorted_configuration(list(config.points), lines, config.role, config.lines.label)
        if _in_general_position(candidate) and verify_configuration(candidate):
            if logger is not None:
                logger.debug(f"Lines perturbed by at most 1/{k} after {attempt + 1} attempt(s)")
            return candidate
        k *= 2
    raise PerturbationException(f"No valid perturbation after {PERTURBATION_MAX_ATTEMPTS} attempts")


@dataclass
class TracedPath:
    path: MonotonePath
    arrangement: Arrangement
    # the configuration actually used; differs from the input when perturbed
    configuration: SeparatedConfiguration
    perturbed: bool


@dataclass(frozen=True)
class _Piece:
    line: int
    start: Point
    end: Point


def _separating_pair(lines: Sequence[DirectedLine], p: Point, q: Point) -> Tuple[int, int]:
    # r: p below, q above; s: p above, q below
    r = next(
        (i for i, line in enumerate(lines)
         if side_of_line(p, line) == Side.BELOW and side_of_line(q, line) == Side.ABOVE),
        None,
    )
    s = next(
        (i for i, line in enumerate(lines)
         if side_of_line(p, line) == Side.ABOVE and side_of_line(q, line) == Side.BELOW),
        None,
    )
    if r is None or s is None:
        raise SeparationFailedException(f"{p} and {q} are not separated by the lines")
    return r, s


def _walk_to_crossing(
    arrangement: Arrangement, start_key: Tuple[int, int], r: int, s: int, leftward: bool
) -> List[_Piece]:
    """
    Walks from a vertex inside the closed wedge of r and s along the
    arrangement to their crossing; pieces are returned in increasing x
    """
    start = arrangement.vertices[start_key]
    crossing = arrangement.vertices[vertex_key(r, s)]
    if r in start_key or s in start_key:
        line = r if r in start_key else s
        pieces = [_Piece(line, start, crossing)]
    else:
        # the start vertex lies in the closed wedge of r and s, so either of
        # its lines meets r or s on the way to their crossing
        line = start_key[0]
        hits = [
            (arrangement.vertices[vertex_key(line, target)], target)
            for target in (r, s)
            if (arrangement.vertices[vertex_key(line, target)].x < start.x) == leftward
        ]
        if len(hits) == 0:
            raise SeparationFailedException(f"Walk from {start} never meets lines {r} and {s}")
        hit, target = (max if leftward else min)(hits, key=lambda h: h[0].x)
        pieces = [_Piece(line, start, hit), _Piece(target, hit, crossing)]
    if leftward:
        return [_Piece(piece.line, piece.end, piece.start) for piece in reversed(pieces)]
    return pieces


def _assemble(pieces: List[_Piece], arrangement: Arrangement) -> MonotonePath:
    merged: List[_Piece] = []
    for piece in pieces:
        if piece.start == piece.end:
            continue
        if len(merged) > 0 and merged[-1].line == piece.line:
            merged[-1] = _Piece(piece.line, merged[-1].start, piece.end)
        else:
            merged.append(piece)
    segments = [PathSegment(piece.line, piece.start.x, piece.end.x) for piece in merged]
    segments[0] = PathSegment(segments[0].line, None, segments[0].end)
    segments[-1] = PathSegment(segments[-1].line, segments[-1].start, None)
    bends = [
        Bend(
            before.end,
            before.line,
            after.line,
            bend_direction(arrangement.lines[before.line], arrangement.lines[after.line]),
        )
        for before, after in zip(merged, merged[1:])
    ]
    return MonotonePath(segments, bends)


def points_to_path(
    config: SeparatedConfiguration,
    seed: int = 0,
    logger: Optional[CustomLogger] = None,
    start_k: int = DEFAULT_PERTURBATION_DENOMINATOR,
) -> TracedPath:
    """
    Builds a monotone path from points p_1 .. p_h that the lines separate
    consecutively: for every interior point the path runs along the upper
    boundary of its face, and between two faces it passes through the
    crossing of the two lines separating the neighbouring points.
    Lines are perturbed first when they are not in general position.
    Args:
        config: configuration with role lines-separate-points
        seed: seed for a perturbation, if one is needed
        logger: optional logger
        start_k: denominator of the first perturbation attempt

    Returns:
        verified path of length at least h - 2 with the arrangement it lives in
    """
    if config.role != ConfigurationRole.LINES_SEPARATE_POINTS:
        raise ValueError(f"Configuration has role {config.role.value}, expected lines-separate-points")
    if len(config.lines) == 0:
        raise ValueError("Configuration has no lines")
    perturbed = False
    if not _in_general_position(config):
        config = perturb_configuration(config, seed, logger, start_k)
        perturbed = True
    elif not verify_configuration(config):
        raise SeparationFailedException("Consecutive points are not separated by the lines")

    arrangement = build_arrangement(config.lines)
    points = config.points
    if len(points) <= 2:
        path = MonotonePath([PathSegment(0, None, None)], [])
        return TracedPath(path, arrangement, config, perturbed)

    chains = [locate_face(points[i], arrangement).upper_chain() for i in range(1, len(points) - 1)]
    pieces: List[_Piece] = []
    for position, chain in enumerate(chains):
        if position > 0:
            r, s = _separating_pair(arrangement.lines, points[position], points[position + 1])
            pieces.extend(_walk_to_crossing(arrangement, chains[position - 1].vertices[-1], r, s, False))
            pieces.extend(_walk_to_crossing(arrangement, chain.vertices[0], r, s, True))
        pieces.extend(
            _Piece(line, chain.points[t], chain.points[t + 1]) for t, line in enumerate(chain.lines)
        )
    path = _assemble(pieces, arrangement)
    if not verify_monotone_path(path, arrangement):
        raise SeparationFailedException("Walk between the faces did not give a monotone path")
    return TracedPath(path, arrangement, config, perturbed)
