from analysis.arrangement import build_arrangement, longest_monotone_path
from analysis.reductions import path_to_points, wedges_for_path
from analysis.separable import enumerate_separable
from geometry.core import LineSet, PointSet
from render.svg import (
    Overlay,
    arrangement_overlay,
    configuration_overlay,
    family_overlay,
    render_svg,
)

THREE_LINES = LineSet.of([(1, 0), (0, 0), (-1, 2)], "three-lines")


def test_empty_overlay():
    document = render_svg(Overlay())
    assert document.lstrip().startswith("<?xml")
    assert "</svg>" in document


def test_deterministic():
    arrangement = build_arrangement(THREE_LINES.lines)
    path = longest_monotone_path(arrangement)
    wedges = [wedge for pair in wedges_for_path(path, arrangement) for wedge in pair]
    overlay = arrangement_overlay(arrangement, path, wedges)
    assert len(overlay.wedges) == 2
    assert render_svg(overlay) == render_svg(arrangement_overlay(arrangement, path, wedges))


def test_configuration():
    arrangement = build_arrangement(THREE_LINES.lines)
    config = path_to_points(longest_monotone_path(arrangement), arrangement)
    overlay = configuration_overlay(config)
    assert overlay.title == "lines-separate-points"
    assert len(overlay.points) == 3
    assert "</svg>" in render_svg(overlay)


def test_family_skips_empty_member():
    family = enumerate_separable(PointSet.of([(0, 0), (4, 0), (2, 3)]))
    overlay = family_overlay(family)
    assert len(overlay.hulls) == len(family) - 1
    assert sorted(len(hull) for hull in overlay.hulls) == [1, 1, 1, 2, 2, 2, 3]
    assert "</svg>" in render_svg(overlay)
