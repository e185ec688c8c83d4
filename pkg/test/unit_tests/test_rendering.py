import os
import tempfile

import numpy as np

from curvexfer.geometry import BezierCurve, BezierTriangle, BoundingBox, intersect_triangles
from curvexfer.mesh import gen_disc_mesh
from curvexfer.rendering import DrawEngine, SvgCanvas

T0 = BezierTriangle([(0, 0), (4, 0), (8, 0), (0, 4), (4, 4), (0, 8)])
T1 = BezierTriangle([(-2, 4), (4, -4), (10, 4), (-1, 7), (5, 7), (0, 10)])


class TestRendering:
    def main(self):
        self.execute_tests()

    def execute_tests(self):
        print(f"\n{self.__class__.__name__} started:")
        self.test_canvas_items()
        self.test_canvas_options()
        self.test_canvas_order()
        self.test_svg_document()
        self.test_fixed_view()
        self.test_cubic_pieces()
        self.test_draw_triangle()
        self.test_draw_mesh()
        self.test_draw_polygon_and_points()
        self.test_convergence_plot()

    def test_canvas_items(self):
        print(" -> test_canvas_items: ", end="")
        canvas = SvgCanvas()
        line = canvas.create_line([(0, 0), (1, 1)], tags=("edge", "first"))
        canvas.create_line([(1, 1), (2, 0)], tags="edge")
        assert len(canvas) == 2 and len(canvas.find_withtag("edge")) == 2
        assert canvas.find_withtag(line) == (line,) and canvas.find_withtag(999) == ()
        assert canvas.gettags(line) == ("edge", "first")
        np.testing.assert_array_equal(canvas.coords("first"), [[0, 0], [1, 1]])
        canvas.coords("first", [(0, 1), (1, 0)])
        np.testing.assert_array_equal(canvas.coords(line), [[0, 1], [1, 0]])
        assert canvas.coords("missing") is None
        canvas.delete("edge")
        assert len(canvas) == 0
        print("successful")

    def test_canvas_options(self):
        print(" -> test_canvas_options: ", end="")
        canvas = SvgCanvas()
        canvas.create_line([(0, 0), (1, 1)], tags="edge", outline="red")
        canvas.itemconfig("edge", outline="blue", width=2.0)
        assert 'stroke="blue"' in canvas.to_svg() and 'stroke-width="2"' in canvas.to_svg()
        for create in (lambda: canvas.create_line([(0, 0), (1, 1)], colour="red"),
                       lambda: canvas.itemconfig("edge", colour="red")):
            try:
                create()
            except ValueError:
                pass
            else:
                raise AssertionError("expected ValueError")
        print("successful")

    def test_canvas_order(self):
        print(" -> test_canvas_order: ", end="")
        canvas = SvgCanvas()
        a = canvas.create_line([(0, 0), (1, 1)], tags=("a", "all"))
        b = canvas.create_line([(0, 1), (1, 0)], tags=("b", "all"))
        assert canvas.find_withtag("all") == (a, b)
        canvas.tag_lower("b")
        assert canvas.find_withtag("all") == (b, a)
        print("successful")

    def test_svg_document(self):
        print(" -> test_svg_document: ", end="")
        canvas = SvgCanvas(width=200, height=100, background="#FFFFFF")
        piece = np.array([(0, 0), (1, 2), (2, 2), (3, 0)])
        canvas.create_path([piece], closed=True, outline="black")
        canvas.create_line([(0, 0), (3, 0), (1, -1)], closed=True)
        canvas.create_line([(0, 0), (3, 0)], dash=(2, 3))
        canvas.create_circle(1.0, 1.0, 4.0, fill="red")
        canvas.create_text(0.5, 0.5, "a<b")
        document = canvas.to_svg()
        assert document.startswith("<svg") and document.rstrip().endswith("</svg>")
        assert 'width="200" height="100"' in document and 'fill="#FFFFFF"' in document
        assert "<path" in document and " C " in document and document.count("Z") == 1
        assert "<polygon" in document and "<polyline" in document and 'stroke-dasharray="2 3"' in document
        assert '<circle' in document and 'r="4"' in document
        assert "a&lt;b" in document
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "drawing.svg")
            canvas.save(path)
            with open(path, "r") as f:
                assert f.read() == document
        print("successful")

    def test_fixed_view(self):
        print(" -> test_fixed_view: ", end="")
        canvas = SvgCanvas(width=100, height=100, margin=0)
        canvas.create_circle(0.0, 0.0)
        canvas.create_circle(1.0, 1.0)
        canvas.set_view(BoundingBox(0.0, 1.0, 0.0, 1.0))
        document = canvas.to_svg()
        # y axis points up, so the origin is the bottom left pixel
        assert 'cx="0.00" cy="100.00"' in document
        assert 'cx="100.00" cy="0.00"' in document
        print("successful")

    def test_cubic_pieces(self):
        print(" -> test_cubic_pieces: ", end="")
        quadratic = BezierCurve([(0, 0), (1, 2), (2, 0)])
        pieces = DrawEngine.cubic_pieces(quadratic)
        assert len(pieces) == 1
        np.testing.assert_allclose(pieces[0], [(0, 0), (2 / 3, 4 / 3), (4 / 3, 4 / 3), (2, 0)], atol=1e-15)

        quintic = BezierCurve([(0, 0), (1, 3), (2, -1), (3, 2), (4, 0), (5, 1)])
        pieces = DrawEngine.cubic_pieces(quintic)
        assert len(pieces) == 10
        np.testing.assert_allclose(pieces[0][0], quintic.start, atol=1e-14)
        np.testing.assert_allclose(pieces[-1][3], quintic.end, atol=1e-14)
        for first, second in zip(pieces, pieces[1:]):
            np.testing.assert_allclose(first[3], second[0], atol=1e-14)
        print("successful")

    def test_draw_triangle(self):
        print(" -> test_draw_triangle: ", end="")
        canvas = SvgCanvas()
        engine = DrawEngine(canvas)
        assert engine.draw_triangle(T0, "t0") is True
        assert len(canvas.find_withtag("t0")) == 1
        # degree 2 edges are exact cubics, one piece per edge
        assert canvas.coords("t0").shape == (12, 2)
        assert engine.draw_triangle(T1, "t0", color="red") is False
        assert len(canvas) == 1
        np.testing.assert_allclose(canvas.coords("t0")[0], T1.corners[0])
        assert 'stroke="red"' in canvas.to_svg()
        print("successful")

    def test_draw_mesh(self):
        print(" -> test_draw_mesh: ", end="")
        canvas = SvgCanvas()
        engine = DrawEngine(canvas)
        mesh = gen_disc_mesh(2, 1)
        assert engine.draw_mesh(mesh, "disc") is True
        assert len(canvas) == len(mesh)
        assert engine.draw_mesh(mesh, "disc") is False
        assert len(canvas) == len(mesh)
        assert canvas.find_withtag("disc_0")
        print("successful")

    def test_draw_polygon_and_points(self):
        print(" -> test_draw_polygon_and_points: ", end="")
        canvas = SvgCanvas()
        engine = DrawEngine(canvas)
        polygon = intersect_triangles(T0, T1)[0]
        assert engine.draw_polygon(polygon, "overlap") is True
        assert 'fill-opacity="0.6"' in canvas.to_svg()
        engine.draw_points(polygon.vertices, "vertices")
        assert len(canvas.find_withtag("vertices")) == len(polygon)
        engine.draw_points([(0.0, 0.0), (1.0, 1.0)], "vertices")
        assert len(canvas.find_withtag("vertices")) == 2
        print("successful")

    def test_convergence_plot(self):
        print(" -> test_convergence_plot: ", end="")
        canvas = SvgCanvas()
        engine = DrawEngine(canvas)
        try:
            engine.draw_convergence_plot([0.5, 0.25], [0.0, 0.0])
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

        canvas.create_circle(0.0, 0.0, tags="marker")
        h = [0.5, 0.25, 0.125]
        engine.draw_convergence_plot(h, [0.1 * x ** 2 for x in h], title="area", slope=2.0)
        document = canvas.to_svg()
        assert "slope 2.000" in document and "1e-1" in document
        parts = canvas.find_withtag("plot_parts")
        assert len(parts) > 3
        # the plot sits below items drawn before it
        assert canvas.find_withtag("marker")[0] not in parts
        engine.draw_convergence_plot(h, [0.1 * x ** 2 for x in h])
        assert len(canvas.find_withtag("plot_parts")) < len(parts)
        print("successful")


if __name__ == "__main__":
    TestRendering().main()
