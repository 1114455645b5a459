"""Contains seeded instance generators and the named example instances"""
import random
from fractions import Fraction
from typing import Callable, Dict, Optional, Union

from analysis.arrangement import build_arrangement, longest_monotone_path
from analysis.pseudodisc import PseudoDiscFamily
from analysis.reductions import SeparatedConfiguration, path_to_points
from geometry.core import (
    DegenerateArrangementException,
    GeneralPositionException,
    LineSet,
    PointSet,
    validate_general_position,
    validate_simple_arrangement,
)
from util.const import DEFAULT_COORDINATE_RANGE, DEFAULT_MAX_RETRIES
from util.helpers import CustomLogger, mask_of

# slopes of random lines are multiples of this
SLOPE_DENOMINATOR = 4


def random_points(
    n: int,
    seed: int,
    coordinate_range: int = DEFAULT_COORDINATE_RANGE,
    max_retries: int = DEFAULT_MAX_RETRIES,
    logger: Optional[CustomLogger] = None,
) -> PointSet:
    """
    Integer points in [-range, range]^2 with distinct x-coordinates and no
    three collinear, by rejection sampling
    Args:
        n: number of points
        seed: random seed, fully determines the result
        coordinate_range: coordinate bound
        max_retries: rejected samples before giving up
        logger: optional logger

    Returns:
        point set in general position
    """
    if n < 1:
        raise ValueError(f"Need n >= 1, got {n}")
    if n > 2 * coordinate_range + 1:
        raise ValueError(f"{n} distinct x-coordinates do not fit in [-{coordinate_range}, {coordinate_range}]")
    rng = random.Random(seed)
    for attempt in range(max_retries):
        xs = rng.sample(range(-coordinate_range, coordinate_range + 1), n)
        ys = [rng.randint(-coordinate_range, coordinate_range) for _ in range(n)]
        points = PointSet.of(zip(xs, ys), f"random-points n={n} seed={seed}")
        if validate_general_position(points).passed:
            if logger is not None and attempt > 0:
                logger.debug(f"Random points accepted after {attempt} rejection(s)")
            return points
    raise GeneralPositionException(
        f"No general-position sample for n={n} seed={seed} after {max_retries} attempts; re-seed"
    )


def random_lines(
    n: int,
    seed: int,
    coordinate_range: int = DEFAULT_COORDINATE_RANGE,
    max_retries: int = DEFAULT_MAX_RETRIES,
    logger: Optional[CustomLogger] = None,
) -> LineSet:
    """
    Lines with distinct slopes k/4 and integer intercepts, resampled until
    no three are concurrent
    """
    if n < 1:
        raise ValueError(f"Need n >= 1, got {n}")
    numerators = range(-coordinate_range * SLOPE_DENOMINATOR, coordinate_range * SLOPE_DENOMINATOR + 1)
    rng = random.Random(seed)
    for attempt in range(max_retries):
        slopes = rng.sample(numerators, n)
        intercepts = [rng.randint(-coordinate_range, coordinate_range) for _ in range(n)]
        lines = LineSet.of(
            ((Fraction(s, SLOPE_DENOMINATOR), b) for s, b in zip(slopes, intercepts)),
            f"random-lines n={n} seed={seed}",
        )
        if validate_simple_arrangement(lines.lines).passed:
            if logger is not None and attempt > 0:
                logger.debug(f"Random lines accepted after {attempt} rejection(s)")
            return lines
    raise DegenerateArrangementException(
        f"No simple arrangement for n={n} seed={seed} after {max_retries} attempts; re-seed"
    )


def random_separated(
    n: int,
    seed: int,
    coordinate_range: int = DEFAULT_COORDINATE_RANGE,
    max_retries: int = DEFAULT_MAX_RETRIES,
    logger: Optional[CustomLogger] = None,
) -> SeparatedConfiguration:
    """
    Points separated consecutively by n random lines, placed along a
    longest monotone path of their arrangement
    """
    lines = random_lines(n, seed, coordinate_range, max_retries, logger)
    arrangement = build_arrangement(lines.lines)
    return path_to_points(longest_monotone_path(arrangement), arrangement, logger)


def _plus_shape() -> PseudoDiscFamily:
    # a wide flat quadrilateral crossed by a tall narrow one
    ambient = PointSet.of(
        [(-6, -1), (5, -2), (6, 1), (-5, 2), (-1, -7), (2, -6), (1, 7), (-2, 6)],
        "plus-shape",
    )
    return PseudoDiscFamily(ambient, [mask_of(range(4)), mask_of(range(4, 8))])


NAMED_EXAMPLES: Dict[str, Callable[[], Union[PointSet, LineSet, PseudoDiscFamily]]] = {
    "triangle": lambda: PointSet.of([(0, 0), (4, 0), (2, 3)], "triangle"),
    "triangle-interior": lambda: PointSet.of([(0, 0), (4, 0), (2, 3), (3, 1)], "triangle-interior"),
    "convex-four": lambda: PointSet.of([(0, 0), (4, 1), (3, 5), (-1, 3)], "convex-four"),
    "three-lines": lambda: LineSet.of([(1, 0), (0, 0), (-1, 2)], "three-lines"),
    "plus-shape": _plus_shape,
}


def named_example(name: str) -> Union[PointSet, LineSet, PseudoDiscFamily]:
    """
    Fixed instances: point sets, the three-line arrangement with a monotone
    path of length 4, and a pair of crossing quadrilaterals as a family
    """
    if name not in NAMED_EXAMPLES:
        raise ValueError(f"Unknown example {name!r}, choose from {sorted(NAMED_EXAMPLES)}")
    return NAMED_EXAMPLES[name]()
