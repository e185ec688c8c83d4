from .svg_canvas import SvgCanvas
from .draw_engine import DrawEngine
