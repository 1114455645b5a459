"""Contains static SVG figures; floats are used for drawing only"""
import io
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from analysis.arrangement import Arrangement, BendDirection, MonotonePath  # noqa: E402
from analysis.reductions import SeparatedConfiguration, Wedge, WedgeKind  # noqa: E402
from analysis.separable import SubsetFamily  # noqa: E402
from geometry.core import DirectedLine, Point, convex_hull  # noqa: E402
from util.const import SVG_FIGURE_SIZE, SVG_HASH_SALT, SVG_MARGIN  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT

XY = Tuple[float, float]


def _xy(p: Point) -> XY:
    return float(p.x), float(p.y)


@dataclass
class Overlay:
    """Everything a figure shows"""

    title: str = ""
    points: List[Point] = field(default_factory=list)
    lines: List[DirectedLine] = field(default_factory=list)
    hulls: List[List[Point]] = field(default_factory=list)
    path: Optional[MonotonePath] = None
    path_lines: List[DirectedLine] = field(default_factory=list)
    wedges: List[Wedge] = field(default_factory=list)


def _extent(overlay: Overlay) -> Tuple[float, float, float, float]:
    anchors = list(overlay.points) + [p for hull in overlay.hulls for p in hull]
    anchors += [w.apex for w in overlay.wedges]
    if overlay.path is not None:
        anchors += [bend.vertex for bend in overlay.path.bends]
    if len(anchors) == 0:
        # lines only: frame their pairwise crossings
        for i, a in enumerate(overlay.lines):
            for b in overlay.lines[i + 1:]:
                if a.slope != b.slope:
                    anchors.append(a.crossing(b))
    if len(anchors) == 0:
        return -1.0, 1.0, -1.0, 1.0
    xs = [float(p.x) for p in anchors]
    ys = [float(p.y) for p in anchors]
    return (
        min(xs) - SVG_MARGIN,
        max(xs) + SVG_MARGIN,
        min(ys) - SVG_MARGIN,
        max(ys) + SVG_MARGIN,
    )


def _line_ends(line: DirectedLine, x0: float, x1: float) -> Tuple[List[float], List[float]]:
    slope, intercept = float(line.slope), float(line.intercept)
    return [x0, x1], [slope * x0 + intercept, slope * x1 + intercept]


def _wedge_polygon(wedge: Wedge, reach: float) -> List[XY]:
    apex_x = float(wedge.apex.x)
    x = apex_x - reach if wedge.kind == WedgeKind.LEFT else apex_x + reach
    ends = [
        (x, float(line.slope) * x + float(line.intercept))
        for line in (wedge.outgoing, wedge.incoming)
    ]
    return [_xy(wedge.apex)] + ends


def render_svg(overlay: Overlay) -> str:
    """
    Draws the overlay; equal overlays give byte-identical documents
    """
    x0, x1, y0, y1 = _extent(overlay)
    figure, axes = plt.subplots(figsize=SVG_FIGURE_SIZE)
    try:
        axes.set_xlim(x0, x1)
        axes.set_ylim(y0, y1)
        if overlay.title:
            axes.set_title(overlay.title)

        for wedge in overlay.wedges:
            color = "tab:blue" if wedge.kind == WedgeKind.LEFT else "tab:orange"
            axes.add_patch(
                Polygon(_wedge_polygon(wedge, (x1 - x0) / 4), closed=True, alpha=0.2, color=color)
            )
        for line in overlay.lines:
            xs, ys = _line_ends(line, x0, x1)
            axes.plot(xs, ys, color="0.6", linewidth=0.8)
        for hull in overlay.hulls:
            if len(hull) >= 3:
                axes.add_patch(Polygon([_xy(p) for p in hull], closed=True, fill=False))
            elif len(hull) == 2:
                axes.plot(*zip(*[_xy(p) for p in hull]), color="black", linewidth=1.0)
        if overlay.path is not None:
            for segment in overlay.path.segments:
                line = overlay.path_lines[segment.line]
                start = x0 if segment.start is None else float(segment.start)
                end = x1 if segment.end is None else float(segment.end)
                xs, ys = _line_ends(line, start, end)
                axes.plot(xs, ys, color="tab:red", linewidth=2.0)
            for bend in overlay.path.bends:
                marker = "v" if bend.direction == BendDirection.DOWN else "^"
                axes.plot(*_xy(bend.vertex), marker=marker, color="tab:red")
        if len(overlay.points) > 0:
            axes.scatter(
                [float(p.x) for p in overlay.points],
                [float(p.y) for p in overlay.points],
                color="black",
                s=12,
                zorder=3,
            )

        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})
        return buffer.getvalue()
    finally:
        plt.close(figure)


def arrangement_overlay(
    arrangement: Arrangement, path: Optional[MonotonePath] = None, wedges: Sequence[Wedge] = ()
) -> Overlay:
    return Overlay(
        title=f"{len(arrangement)} lines",
        lines=list(arrangement.lines),
        path=path,
        path_lines=list(arrangement.lines),
        wedges=list(wedges),
    )


def configuration_overlay(config: SeparatedConfiguration) -> Overlay:
    return Overlay(
        title=config.role.value,
        points=list(config.points),
        lines=list(config.lines),
    )


def family_overlay(family: SubsetFamily) -> Overlay:
    hulls = [
        list(convex_hull(family.ambient, member).points)
        for member in family.members
        if member != 0
    ]
    return Overlay(
        title=f"{len(family)} members", points=list(family.ambient), hulls=hulls
    )
