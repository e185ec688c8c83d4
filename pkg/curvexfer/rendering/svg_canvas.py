from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape

import numpy as np

from ..geometry.bezier_curve import BoundingBox
from ..utility import check_kwargs_empty, pop_from_dict_by_set

Tags = Union[str, Tuple[str, ...]]


class _Item(NamedTuple):
    kind: str
    coords: np.ndarray
    options: dict
    tags: Tuple[str, ...]


class SvgCanvas:
    """
    In-memory drawing surface with tagged items, written out as SVG.

    Items are stored in world coordinates and mapped to pixels only when the
    document is serialised, with the y axis flipped so that mathematical
    coordinates render upright. The view is fitted to all items unless it was
    fixed with set_view().

    - .create_path() takes a list of cubic pieces (4 control points each).
    - .create_line() draws a polyline, .create_circle() a dot of fixed pixel radius.
    - .coords() and .itemconfig() address items by id or tag like a tkinter canvas.
    """

    _valid_options = {"fill", "outline", "width", "dash", "closed", "radius", "text", "font_size", "anchor", "opacity"}

    def __init__(self, width: int = 640, height: int = 480, margin: int = 24, background: str = "white"):
        self.width = width
        self.height = height
        self.margin = margin
        self.background = background
        self._items: Dict[int, _Item] = {}
        self._order: List[int] = []
        self._next_id = 1
        self._view: Optional[BoundingBox] = None
        self._uniform = True

    def _create(self, kind: str, coords, tags: Tags, options: dict) -> int:
        options = dict(options)
        valid = pop_from_dict_by_set(options, self._valid_options)
        check_kwargs_empty(options, raise_error=True)
        item_id = self._next_id
        self._next_id += 1
        self._items[item_id] = _Item(kind, np.array(coords, dtype=np.float64).reshape(-1, 2), valid,
                                     (tags,) if isinstance(tags, str) else tuple(tags))
        self._order.append(item_id)
        return item_id

    def create_path(self, pieces: Sequence[np.ndarray], tags: Tags = (), **options) -> int:
        """ joined cubic Bezier pieces, each given by its four control points """
        coords = np.vstack([np.asarray(piece, dtype=np.float64).reshape(4, 2) for piece in pieces])
        return self._create("path", coords, tags, options)

    def create_line(self, points, tags: Tags = (), **options) -> int:
        return self._create("line", points, tags, options)

    def create_circle(self, x: float, y: float, radius: float = 3.0, tags: Tags = (), **options) -> int:
        options["radius"] = radius
        return self._create("circle", [(x, y)], tags, options)

    def create_text(self, x: float, y: float, text: str, tags: Tags = (), **options) -> int:
        options["text"] = text
        return self._create("text", [(x, y)], tags, options)

    def find_withtag(self, tag_or_id: Union[str, int]) -> Tuple[int, ...]:
        if isinstance(tag_or_id, int):
            return (tag_or_id,) if tag_or_id in self._items else ()
        return tuple(item_id for item_id in self._order if tag_or_id in self._items[item_id].tags)

    def gettags(self, item_id: int) -> Tuple[str, ...]:
        return self._items[item_id].tags

    def coords(self, tag_or_id: Union[str, int], *args):
        """ coordinates of the lowest matching item, or replace them for every matching item """
        ids = self.find_withtag(tag_or_id)
        if not args:
            return self._items[ids[0]].coords.copy() if ids else None
        coords = np.array(args[0] if len(args) == 1 else args, dtype=np.float64).reshape(-1, 2)
        for item_id in ids:
            self._items[item_id] = self._items[item_id]._replace(coords=coords)

    def itemconfig(self, tag_or_id: Union[str, int], **options):
        valid = pop_from_dict_by_set(options, self._valid_options)
        check_kwargs_empty(options, raise_error=True)
        for item_id in self.find_withtag(tag_or_id):
            self._items[item_id].options.update(valid)

    def delete(self, tag_or_id: Union[str, int]):
        for item_id in self.find_withtag(tag_or_id):
            del self._items[item_id]
            self._order.remove(item_id)

    def tag_lower(self, tag_or_id: Union[str, int]):
        """ move the matching items below all others """
        ids = self.find_withtag(tag_or_id)
        self._order = list(ids) + [item_id for item_id in self._order if item_id not in ids]

    def __len__(self) -> int:
        return len(self._order)

    def set_view(self, view: Optional[BoundingBox], uniform: bool = True):
        """ world rectangle mapped onto the drawing area, None fits all items """
        self._view = view
        self._uniform = uniform

    def _fitted_view(self) -> BoundingBox:
        if self._view is not None:
            return self._view
        located = [self._items[item_id].coords for item_id in self._order if self._items[item_id].kind != "text"]
        if not located:
            return BoundingBox(0.0, 1.0, 0.0, 1.0)
        return BoundingBox.of_points(np.vstack(located))

    def _transform(self):
        view = self._fitted_view()
        span_x = max(view.x_max - view.x_min, 1e-300)
        span_y = max(view.y_max - view.y_min, 1e-300)
        scale_x = (self.width - 2 * self.margin) / span_x
        scale_y = (self.height - 2 * self.margin) / span_y
        if self._uniform:
            scale_x = scale_y = min(scale_x, scale_y)

        def to_pixels(points: np.ndarray) -> np.ndarray:
            x = self.margin + (points[:, 0] - view.x_min) * scale_x
            y = self.height - self.margin - (points[:, 1] - view.y_min) * scale_y
            return np.column_stack([x, y])
        return to_pixels

    @staticmethod
    def _style(options: dict, default_fill: str = "none") -> str:
        attributes = [f'fill="{options.get("fill", default_fill)}"']
        if "outline" in options:
            attributes.append(f'stroke="{options["outline"]}"')
            attributes.append(f'stroke-width="{options.get("width", 1.0):g}"')
        if "dash" in options:
            attributes.append(f'stroke-dasharray="{" ".join(str(d) for d in options["dash"])}"')
        if "opacity" in options:
            attributes.append(f'fill-opacity="{options["opacity"]:g}"')
        return " ".join(attributes)

    def _element(self, item: _Item, to_pixels) -> str:
        pixels = to_pixels(item.coords)
        if item.kind == "path":
            commands = [f"M {pixels[0, 0]:.2f} {pixels[0, 1]:.2f}"]
            for piece in pixels.reshape(-1, 4, 2):
                commands.append("C " + " ".join(f"{x:.2f} {y:.2f}" for x, y in piece[1:]))
            if item.options.get("closed", False):
                commands.append("Z")
            return f'<path d="{" ".join(commands)}" {self._style(item.options)}/>'
        if item.kind == "line":
            points = " ".join(f"{x:.2f},{y:.2f}" for x, y in pixels)
            tag = "polygon" if item.options.get("closed", False) else "polyline"
            return f'<{tag} points="{points}" {self._style(item.options)}/>'
        if item.kind == "circle":
            return (f'<circle cx="{pixels[0, 0]:.2f}" cy="{pixels[0, 1]:.2f}" r="{item.options["radius"]:g}" '
                    f'{self._style(item.options, default_fill="black")}/>')
        anchor = item.options.get("anchor", "start")
        return (f'<text x="{pixels[0, 0]:.2f}" y="{pixels[0, 1]:.2f}" font-size="{item.options.get("font_size", 11)}" '
                f'font-family="sans-serif" text-anchor="{anchor}" fill="{item.options.get("fill", "black")}">'
                f'{escape(str(item.options["text"]))}</text>')

    def to_svg(self) -> str:
        to_pixels = self._transform()
        lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
                 f'viewBox="0 0 {self.width} {self.height}">',
                 f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="{self.background}"/>']
        lines += [self._element(self._items[item_id], to_pixels) for item_id in self._order]
        lines.append("</svg>")
        return "\n".join(lines) + "\n"

    def save(self, path):
        with open(path, "w") as f:
            f.write(self.to_svg())
