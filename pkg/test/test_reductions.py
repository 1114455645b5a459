import random
from fractions import Fraction

import pytest

from analysis.arrangement import (
    build_arrangement,
    longest_monotone_path,
    path_length,
    verify_monotone_path,
)
from analysis.reductions import (
    ConfigurationRole,
    InvalidAntichainException,
    SeparatedConfiguration,
    UnsortedLinesException,
    WedgeKind,
    all_pairs_separated,
    antichain_to_lines,
    dualize_configuration,
    lines_separate_points,
    lines_to_antichain,
    pair_separates_pair,
    path_to_points,
    perturb_configuration,
    points_separate_lines,
    points_to_path,
    strongly_separates,
    verify_configuration,
    verify_separated_sequence,
    wedges_for_path,
)
from analysis.separable import enumerate_separable, max_antichain, verify_antichain
from geometry.core import (
    DirectedLine,
    LineSet,
    Point,
    PointSet,
    validate_simple_arrangement,
)
from geometry.generators import random_lines, random_points, random_separated
from util.helpers import ceil_half, mask_of

THREE_LINES = LineSet.of([(1, 0), (0, 0), (-1, 2)], "three-lines")
TRIANGLE = PointSet.of([(0, 0), (4, 0), (2, 3)], "triangle")


@pytest.fixture(scope="session")
def three_lines():
    return build_arrangement(THREE_LINES.lines)


@pytest.fixture(scope="session")
def separated_configurations():
    return [random_separated(3 + seed % 6, seed) for seed in range(20)]


def _random_configuration(rng: random.Random) -> SeparatedConfiguration:
    """Up to eight lines with distinct slopes and a handful of grid points, unrelated"""
    slopes = sorted(rng.sample(range(-12, 13), rng.randint(3, 8)))
    lines = tuple(DirectedLine(Fraction(slope, 4), rng.randint(-4, 4)) for slope in slopes)
    grid = [(x, y) for x in range(-6, 7) for y in range(-6, 7)]
    points = PointSet.of(sorted(rng.sample(grid, rng.randint(10, 20))))
    return SeparatedConfiguration(points, LineSet(lines), ConfigurationRole.POINTS_SEPARATE_LINES)


class TestSeparationPredicates:
    def test_strongly_separates(self):
        l1, l2 = DirectedLine(1, 0), DirectedLine(-1, 0)
        x, y = Point(-1, 0), Point(1, 0)
        assert strongly_separates(x, y, l1, l2)
        assert not strongly_separates(x, y, l2, l1)
        assert pair_separates_pair(x, y, l2, l1)
        assert not pair_separates_pair(x, Point(-2, 0), l1, l2)

    def test_points_separate_lines(self):
        l1, l2 = DirectedLine(1, 0), DirectedLine(-1, 0)
        assert points_separate_lines([Point(-1, 0), Point(1, 0)], l1, l2)
        assert not points_separate_lines([Point(-1, 0), Point(0, 5)], l1, l2)

    def test_lines_separate_points(self):
        lines = [DirectedLine(1, 0), DirectedLine(-1, 0)]
        assert lines_separate_points(lines, Point(-1, 0), Point(1, 0))
        assert not lines_separate_points(lines, Point(0, 5), Point(0, 7))

    def test_unsorted_lines(self):
        with pytest.raises(UnsortedLinesException):
            verify_separated_sequence([DirectedLine(1, 0), DirectedLine(-1, 0)], [Point(0, 1)])


class TestConsecutiveSlopes:
    def test_consecutive_separation_gives_all_pairs(self):
        rng = random.Random(17)
        checked = 0
        for _ in range(20_000):
            config = _random_configuration(rng)
            if not verify_configuration(config):
                continue
            assert all_pairs_separated(config), config
            checked += 1
            if checked == 100:
                break
        assert checked == 100

    def test_unfiltered_families_can_fail(self):
        lines = LineSet.of([(-1, 0), (0, 0), (1, 0)])
        points = PointSet.of([(-2, 1), (2, 1)])
        config = SeparatedConfiguration(points, lines, ConfigurationRole.POINTS_SEPARATE_LINES)
        assert not verify_configuration(config)
        assert not all_pairs_separated(config)


class TestAntichainToLines:
    def test_triangle_singletons(self):
        config = antichain_to_lines(TRIANGLE, [mask_of([0]), mask_of([1]), mask_of([2])])
        assert config.role == ConfigurationRole.POINTS_SEPARATE_LINES
        assert len(config.lines) == 2
        assert verify_configuration(config)
        assert all_pairs_separated(config)
        members = lines_to_antichain(config)
        assert verify_antichain(members)
        assert len(set(members)) == 2

    def test_pairs(self):
        config = antichain_to_lines(TRIANGLE, [mask_of([0, 2]), mask_of([1, 2]), mask_of([0, 1])])
        assert len(config.lines) >= 2
        assert verify_configuration(config)
        assert verify_antichain(lines_to_antichain(config))

    def test_shared_x_is_sheared(self):
        p = PointSet.of([(0, 0), (0, 2), (3, 1)], "shared-x")
        config = antichain_to_lines(p, [mask_of([0]), mask_of([1]), mask_of([2])])
        assert len(config.lines) >= 2
        assert verify_configuration(config)
        assert len({q.x for q in config.points}) == 3

    def test_random_maximum_antichains(self):
        for seed in range(12):
            p = random_points(4 + seed % 4, seed)
            antichain = max_antichain(enumerate_separable(p)).antichain
            config = antichain_to_lines(p, antichain)
            assert len(config.lines) >= ceil_half(len(antichain))
            assert all_pairs_separated(config)
            assert verify_antichain(lines_to_antichain(config))

    def test_nested(self):
        with pytest.raises(InvalidAntichainException):
            antichain_to_lines(TRIANGLE, [mask_of([0]), mask_of([0, 1])])

    def test_trivial_member(self):
        with pytest.raises(InvalidAntichainException):
            antichain_to_lines(TRIANGLE, [TRIANGLE.full_mask])

    def test_not_separable(self):
        p = PointSet.of([(0, 0), (4, 0), (2, 3), (3, 1)])
        with pytest.raises(InvalidAntichainException):
            antichain_to_lines(p, [mask_of([3]), mask_of([0, 1])])


class TestLinesToAntichain:
    def test_wrong_role(self, three_lines):
        config = path_to_points(longest_monotone_path(three_lines), three_lines)
        with pytest.raises(ValueError):
            lines_to_antichain(config)

    def test_points_below(self):
        config = SeparatedConfiguration(
            PointSet.of([(-1, 0), (1, 0)]),
            LineSet.of([(-1, 0), (1, 0)]),
            ConfigurationRole.POINTS_SEPARATE_LINES,
        )
        assert lines_to_antichain(config) == [mask_of([0]), mask_of([1])]


class TestPathToPoints:
    def test_three_lines(self, three_lines):
        path = longest_monotone_path(three_lines)
        config = path_to_points(path, three_lines)
        assert config.role == ConfigurationRole.LINES_SEPARATE_POINTS
        assert len(config.points) == 3
        assert verify_configuration(config)
        assert all_pairs_separated(config)

    def test_single_line(self):
        arrangement = build_arrangement(LineSet.of([(2, 1)]).lines)
        config = path_to_points(longest_monotone_path(arrangement), arrangement)
        assert len(config.points) == 1

    def test_wedges(self, three_lines):
        wedges = wedges_for_path(longest_monotone_path(three_lines), three_lines)
        assert len(wedges) == 1
        left, right = wedges[0]
        assert left.kind == WedgeKind.LEFT and right.kind == WedgeKind.RIGHT
        assert left.apex == Point(1, 1)
        assert left.contains(Point(0, 1))
        assert right.contains(Point(2, 1))
        assert not left.contains(Point(2, 1))

    def test_random_arrangements(self):
        for seed in range(25):
            arrangement = build_arrangement(random_lines(2 + seed % 5, seed).lines)
            path = longest_monotone_path(arrangement)
            config = path_to_points(path, arrangement)
            assert len(config.points) >= ceil_half(path_length(path) + 1)
            assert verify_configuration(config)
            assert all_pairs_separated(config)

    def test_invalid_path(self, three_lines):
        path = longest_monotone_path(build_arrangement(LineSet.of([(5, 0), (-5, 1), (0, 7)]).lines))
        with pytest.raises(ValueError):
            path_to_points(path, three_lines)


class TestPointsToPath:
    def test_three_lines(self, three_lines):
        config = path_to_points(longest_monotone_path(three_lines), three_lines)
        traced = points_to_path(config)
        assert not traced.perturbed
        assert verify_monotone_path(traced.path, traced.arrangement)
        assert path_length(traced.path) >= len(config.points) - 2

    def test_random_configurations(self, separated_configurations):
        for config in separated_configurations:
            traced = points_to_path(config)
            assert verify_monotone_path(traced.path, traced.arrangement)
            assert path_length(traced.path) >= len(config.points) - 2
            assert len(traced.path.bends) >= len(config.points) - 3

    def test_wrong_role(self):
        config = antichain_to_lines(TRIANGLE, [mask_of([0]), mask_of([1])])
        with pytest.raises(ValueError):
            points_to_path(config)


class TestPerturbation:
    CONCURRENT = SeparatedConfiguration(
        PointSet.of([(-3, 1), (1, Fraction(1, 2))]),
        LineSet.of([(-1, 0), (0, 0), (1, 0)]),
        ConfigurationRole.LINES_SEPARATE_POINTS,
    )

    def test_perturb(self):
        assert not validate_simple_arrangement(self.CONCURRENT.lines.lines).passed
        perturbed = perturb_configuration(self.CONCURRENT, 3)
        assert validate_simple_arrangement(perturbed.lines.lines).passed
        assert verify_configuration(perturbed)
        assert perturbed == perturb_configuration(self.CONCURRENT, 3)

    def test_points_to_path_perturbs(self):
        traced = points_to_path(self.CONCURRENT, 3)
        assert traced.perturbed
        assert path_length(traced.path) == 1


class TestDuality:
    def test_roles_swap(self, separated_configurations):
        for config in separated_configurations:
            dual = dualize_configuration(config)
            assert dual.role == ConfigurationRole.POINTS_SEPARATE_LINES
            assert len(dual.lines) == len(config.points)
            assert len(dual.points) == len(config.lines)
            assert verify_configuration(dual)
            assert dualize_configuration(dual) == config

    def test_consecutive_separation_gives_all_pairs(self, separated_configurations):
        for config in separated_configurations:
            assert all_pairs_separated(config)
            assert all_pairs_separated(dualize_configuration(config))

    def test_document(self, separated_configurations):
        config = separated_configurations[0]
        assert SeparatedConfiguration.from_json(config.to_json()) == config
