from __future__ import annotations

import math
from typing import TYPE_CHECKING, List, Optional, Sequence

import numpy as np

from ..geometry.bezier_curve import BezierCurve, BoundingBox, elevate_to, evaluate_multi
from ..geometry.bezier_triangle import BezierTriangle
from ..geometry.curved_polygon import CurvedPolygon
from ..settings import SettingsManager

if TYPE_CHECKING:
    from ..mesh.curved_mesh import CurvedMesh
    from .svg_canvas import SvgCanvas


class DrawEngine:
    """
    Draws curves, triangles, curved polygons, meshes and convergence plots
    onto an SvgCanvas. Every draw_ method creates its items under the given
    tag on the first call and only updates their coordinates afterwards.

    Functions:
     - draw_curve()
     - draw_triangle()
     - draw_polygon()
     - draw_mesh()
     - draw_points()
     - draw_convergence_plot()

    """

    def __init__(self, canvas: SvgCanvas):
        self._canvas = canvas

    @staticmethod
    def _setting(key: str):
        return SettingsManager.get("svg", key)

    @staticmethod
    def cubic_pieces(curve: BezierCurve) -> List[np.ndarray]:
        """ exact cubic form for degree <= 3, otherwise Hermite cubics on an even split of [0, 1] """
        if curve.degree <= 3:
            return [elevate_to(curve, 3).control_points]
        count = 2 * curve.degree
        breaks = np.linspace(0.0, 1.0, count + 1)
        points = evaluate_multi(curve, breaks)
        tangents = evaluate_multi(curve.hodograph(), breaks) / (3 * count)
        return [np.array([points[i], points[i] + tangents[i], points[i + 1] - tangents[i + 1], points[i + 1]])
                for i in range(count)]

    def _path(self, curves: Sequence[BezierCurve], tag: str, closed: bool, **options) -> bool:
        pieces = [piece for curve in curves for piece in self.cubic_pieces(curve)]
        if not self._canvas.find_withtag(tag):
            self._canvas.create_path(pieces, tags=tag, closed=closed, **options)
            return True
        self._canvas.coords(tag, np.vstack(pieces))
        self._canvas.itemconfig(tag, **options)
        return False

    def draw_curve(self, curve: BezierCurve, tag: str, color: Optional[str] = None,
                   width: Optional[float] = None) -> bool:
        """ returns True if the item was created """
        return self._path([curve], tag, closed=False, outline=color or self._setting("polygon_color"),
                          width=width or self._setting("curve_width"))

    def draw_triangle(self, triangle: BezierTriangle, tag: str, color: Optional[str] = None,
                      fill: str = "none") -> bool:
        return self._path(triangle.edges(), tag, closed=True, outline=color or self._setting("target_color"),
                          width=self._setting("curve_width"), fill=fill)

    def draw_polygon(self, polygon: CurvedPolygon, tag: str, fill: Optional[str] = None) -> bool:
        return self._path(polygon.segments, tag, closed=True, fill=fill or self._setting("polygon_fill"),
                          outline=self._setting("polygon_color"), width=self._setting("curve_width"), opacity=0.6)

    def draw_mesh(self, mesh: CurvedMesh, tag: str, color: Optional[str] = None) -> bool:
        requires_ordering = False
        for index, element in enumerate(mesh):
            requires_ordering |= self.draw_triangle(element, f"{tag}_{index}", color)
        return requires_ordering

    def draw_points(self, points, tag: str, color: Optional[str] = None, radius: float = 2.5):
        self._canvas.delete(tag)
        for x, y in np.asarray(points, dtype=np.float64).reshape(-1, 2):
            self._canvas.create_circle(x, y, radius, tags=tag, fill=color or self._setting("polygon_color"))

    def draw_convergence_plot(self, h: Sequence[float], errors: Sequence[float], title: str = "",
                              slope: Optional[float] = None):
        """
        log10 E against log10 h with decade ticks on both axes. Non-positive
        errors cannot be shown on a logarithmic axis and are left out.
        """
        h = np.asarray(h, dtype=np.float64)
        errors = np.asarray(errors, dtype=np.float64)
        shown = (h > 0.0) & (errors > 0.0)
        log_h, log_e = np.log10(h[shown]), np.log10(errors[shown])
        if log_h.size == 0:
            raise ValueError("a convergence plot needs at least one positive error")

        x_min, x_max = math.floor(log_h.min()), math.ceil(log_h.max())
        y_min, y_max = math.floor(log_e.min()), math.ceil(log_e.max())
        x_max, y_max = max(x_max, x_min + 1), max(y_max, y_min + 1)
        # room below and left of the axes for tick labels
        pad_x, pad_y = 0.12 * (x_max - x_min), 0.08 * (y_max - y_min)
        self._canvas.set_view(BoundingBox(x_min - pad_x, x_max, y_min - pad_y, y_max + pad_y), uniform=False)

        axis_color, text_color = self._setting("axis_color"), self._setting("text_color")
        font_size = self._setting("font_size")
        self._canvas.delete("plot_parts")
        self._canvas.create_line([(x_min, y_min), (x_max, y_min)], tags="plot_parts", outline=axis_color)
        self._canvas.create_line([(x_min, y_min), (x_min, y_max)], tags="plot_parts", outline=axis_color)
        for decade in range(x_min, x_max + 1):
            self._canvas.create_line([(decade, y_min), (decade, y_max)], tags="plot_parts", outline="#DDDDDD",
                                     dash=(2, 3))
            self._canvas.create_text(decade, y_min - 0.6 * pad_y, f"1e{decade}", tags="plot_parts",
                                     fill=text_color, font_size=font_size, anchor="middle")
        for decade in range(y_min, y_max + 1):
            self._canvas.create_line([(x_min, decade), (x_max, decade)], tags="plot_parts", outline="#DDDDDD",
                                     dash=(2, 3))
            self._canvas.create_text(x_min - 0.1 * pad_x, decade, f"1e{decade}", tags="plot_parts",
                                     fill=text_color, font_size=font_size, anchor="end")

        color = self._setting("plot_color")
        self._canvas.create_line(np.column_stack([log_h, log_e]), tags="plot_parts", outline=color,
                                 width=self._setting("curve_width"))
        for x, y in zip(log_h, log_e):
            self._canvas.create_circle(x, y, 3.0, tags="plot_parts", fill=color)

        label = title if slope is None else f"{title}  slope {slope:.3f}".strip()
        if label:
            self._canvas.create_text(x_min, y_max + 0.4 * pad_y, label, tags="plot_parts", fill=text_color,
                                     font_size=font_size)
        self._canvas.tag_lower("plot_parts")
