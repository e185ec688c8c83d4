import numpy as np

from curvexfer.errors import DegreeError
from curvexfer.geometry import (BezierTriangle, StandardNodes, bernstein_basis_triangle, contains_point, eval_triangle,
                                is_valid, jacobian_det, locate_point, net_to_nodes, nodes_to_net, specialize_triangle,
                                subdivide_triangle, triangle_area)

# b(s, t) = [4(st + s + t), 4(st + t + 1)] given by its standard nodes
QUADRATIC_NODES = np.array([[0, 2, 4, 2, 5, 4], [4, 4, 4, 6, 7, 8]], dtype=float).T
QUADRATIC = BezierTriangle.from_nodes(QUADRATIC_NODES)

T0 = BezierTriangle([(0, 0), (4, 0), (8, 0), (0, 4), (4, 4), (0, 8)])
T1 = BezierTriangle([(-2, 4), (4, -4), (10, 4), (-1, 7), (5, 7), (0, 10)])
UNIT = BezierTriangle([(0, 0), (1, 0), (0, 1)])
INVERTED = BezierTriangle([(1, 0), (0, 0), (1, 1), (0, 0), (0, 0), (0, 1)])


def quadratic_map(s, t):
    return np.stack([4 * (s * t + s + t), 4 * (s * t + t + 1)], axis=-1)


def random_parameters(rng, count: int) -> np.ndarray:
    points = rng.uniform(0.0, 1.0, size=(4 * count, 2))
    return points[points.sum(axis=1) <= 1.0][:count]


class TestBezierTriangle:
    def main(self):
        self.execute_tests()

    def execute_tests(self):
        print(f"\n{self.__class__.__name__} started:")
        self.test_nodes_of_quadratic()
        self.test_linear_is_barycentric()
        self.test_corners()
        self.test_nodes_net_round_trip()
        self.test_reconstructed_net_reproduces_map()
        self.test_edges()
        self.test_jacobian()
        self.test_validity()
        self.test_area()
        self.test_subdivide()
        self.test_specialize()
        self.test_locate_point()
        self.test_locate_outside()
        self.test_degree_limits()
        self.test_partition_of_unity_property()
        self.test_convex_hull_property()
        self.test_locate_inverts_eval_property()

    def test_nodes_of_quadratic(self):
        print(" -> test_nodes_of_quadratic: ", end="")
        rebuilt = BezierTriangle(QUADRATIC.control_net)
        np.testing.assert_allclose(rebuilt.nodes, QUADRATIC_NODES, atol=1e-13)
        assert QUADRATIC.nodes is not None and np.array_equal(QUADRATIC.nodes, QUADRATIC_NODES)
        print("successful")

    def test_linear_is_barycentric(self):
        print(" -> test_linear_is_barycentric: ", end="")
        nodes = np.array([(1.0, 2.0), (4.0, 1.0), (2.0, 5.0)])
        triangle = BezierTriangle.from_nodes(nodes)
        np.testing.assert_array_equal(triangle.control_net, nodes)
        s, t = 0.2, 0.3
        expected = 0.5 * nodes[0] + s * nodes[1] + t * nodes[2]
        np.testing.assert_allclose(eval_triangle(triangle, s, t), expected, atol=1e-14)
        assert triangle.is_affine()
        print("successful")

    def test_corners(self):
        print(" -> test_corners: ", end="")
        for triangle in (QUADRATIC, T0, T1):
            np.testing.assert_allclose(triangle.evaluate(0.0, 0.0), triangle.corners[0], atol=1e-14)
            np.testing.assert_allclose(triangle.evaluate(1.0, 0.0), triangle.corners[1], atol=1e-14)
            np.testing.assert_allclose(triangle.evaluate(0.0, 1.0), triangle.corners[2], atol=1e-14)
        print("successful")

    def test_nodes_net_round_trip(self):
        print(" -> test_nodes_net_round_trip: ", end="")
        rng = np.random.default_rng(10)
        assert np.array_equal(nodes_to_net(net_to_nodes(UNIT)).control_net, UNIT.control_net)
        for _ in range(20):
            triangle = BezierTriangle(rng.uniform(-3.0, 3.0, size=(6, 2)))
            nodes = net_to_nodes(triangle)
            assert isinstance(nodes, StandardNodes) and nodes.degree == 2
            np.testing.assert_allclose(nodes_to_net(nodes).control_net, triangle.control_net, atol=1e-12)
        print("successful")

    def test_reconstructed_net_reproduces_map(self):
        print(" -> test_reconstructed_net_reproduces_map: ", end="")
        parameters = random_parameters(np.random.default_rng(11), 50)
        np.testing.assert_allclose(QUADRATIC.evaluate_multi(parameters),
                                   quadratic_map(parameters[:, 0], parameters[:, 1]), atol=1e-12)
        print("successful")

    def test_edges(self):
        print(" -> test_edges: ", end="")
        bottom, hypotenuse, left = T0.edges()
        r = np.linspace(0.0, 1.0, 7)
        np.testing.assert_allclose(bottom.evaluate_multi(r), np.column_stack([8 * r, 0 * r]), atol=1e-14)
        np.testing.assert_allclose(hypotenuse.evaluate_multi(r), np.column_stack([8 * (1 - r), 8 * r]), atol=1e-14)
        np.testing.assert_allclose(left.evaluate_multi(r), np.column_stack([0 * r, 8 * (1 - r)]), atol=1e-14)
        np.testing.assert_allclose(T1.edges()[0].evaluate_multi(r),
                                   np.column_stack([2 * (6 * r - 1), 4 * (2 * r - 1) ** 2]), atol=1e-13)
        for triangle in (QUADRATIC, T1):
            curves = triangle.edges()
            for index in range(3):
                np.testing.assert_array_equal(curves[index].end, curves[(index + 1) % 3].start)
        print("successful")

    def test_jacobian(self):
        print(" -> test_jacobian: ", end="")
        assert UNIT.jacobian_det(0.3, 0.2) == 1.0
        np.testing.assert_allclose(jacobian_det(QUADRATIC, np.array([0.0, 0.5]), np.array([0.25, 0.25])),
                                   [16.0, 24.0], atol=1e-12)
        # determinant of INVERTED is -4 (s^2 - st - t^2 - s + t)
        assert abs(jacobian_det(INVERTED, 0.0, 0.5) + 1.0) < 1e-14
        assert jacobian_det(INVERTED, 0.25, 0.25) > 0.0
        rng = np.random.default_rng(12)
        h = 1e-6
        for s, t in random_parameters(rng, 3):
            x_s = (QUADRATIC.evaluate(s + h, t) - QUADRATIC.evaluate(s - h, t)) / (2 * h)
            x_t = (QUADRATIC.evaluate(s, t + h) - QUADRATIC.evaluate(s, t - h)) / (2 * h)
            assert abs(jacobian_det(QUADRATIC, s, t) - (x_s[0] * x_t[1] - x_t[0] * x_s[1])) < 1e-6
        print("successful")

    def test_validity(self):
        print(" -> test_validity: ", end="")
        assert is_valid(UNIT)
        assert is_valid(QUADRATIC)
        assert is_valid(T0) and is_valid(T1)
        assert not is_valid(BezierTriangle([(0, 0), (0, 1), (1, 0)]))
        assert not is_valid(INVERTED)
        print("successful")

    def test_area(self):
        print(" -> test_area: ", end="")
        assert abs(triangle_area(UNIT) - 0.5) < 1e-15
        assert abs(triangle_area(T0) - 32.0) < 1e-12
        assert abs(triangle_area(QUADRATIC) - 32.0 / 3.0) < 1e-12
        print("successful")

    def test_subdivide(self):
        print(" -> test_subdivide: ", end="")
        children = subdivide_triangle(T0)
        assert len(children) == 4
        for child in children:
            assert child.is_affine()
            assert abs(triangle_area(child) - 8.0) < 1e-12
        parameters = random_parameters(np.random.default_rng(13), 20)
        corner = subdivide_triangle(QUADRATIC)[0]
        np.testing.assert_allclose(corner.evaluate_multi(parameters), QUADRATIC.evaluate_multi(parameters / 2.0),
                                   atol=1e-13)
        assert abs(sum(triangle_area(child) for child in subdivide_triangle(QUADRATIC)) - 32.0 / 3.0) < 1e-12
        assert all(is_valid(child) for child in subdivide_triangle(T1))
        print("successful")

    def test_specialize(self):
        print(" -> test_specialize: ", end="")
        same = specialize_triangle(QUADRATIC, [(0, 0), (1, 0), (0, 1)])
        np.testing.assert_allclose(same.control_net, QUADRATIC.control_net, atol=1e-14)
        middle = specialize_triangle(QUADRATIC, [(0.5, 0.5), (0.0, 0.5), (0.5, 0.0)])
        np.testing.assert_allclose(middle.evaluate(0.0, 0.0), QUADRATIC.evaluate(0.5, 0.5), atol=1e-13)
        np.testing.assert_allclose(middle.evaluate(1 / 3, 1 / 3), QUADRATIC.evaluate(1 / 3, 1 / 3), atol=1e-13)
        print("successful")

    def test_locate_point(self):
        print(" -> test_locate_point: ", end="")
        s, t = locate_point(QUADRATIC, (2.0, 4.0))
        assert abs(s - 0.5) < 1e-9 and abs(t) < 1e-9
        s, t = locate_point(QUADRATIC, QUADRATIC.corners[0])
        assert abs(s) < 1e-9 and abs(t) < 1e-9
        s, t = locate_point(UNIT, (0.25, 0.5))
        assert abs(s - 0.25) < 1e-15 and abs(t - 0.5) < 1e-15
        assert contains_point(T0, (1.0, 1.0))
        print("successful")

    def test_locate_outside(self):
        print(" -> test_locate_outside: ", end="")
        assert locate_point(QUADRATIC, (100.0, 100.0)) is None
        assert locate_point(QUADRATIC, (1.0, 7.0)) is None
        assert not contains_point(T0, (5.0, 5.0))
        assert not contains_point(UNIT, (-0.1, 0.5))
        print("successful")

    def test_degree_limits(self):
        print(" -> test_degree_limits: ", end="")
        for size in (1, 78):
            try:
                BezierTriangle(np.zeros((size, 2)))
            except DegreeError:
                pass
            else:
                raise AssertionError(f"expected DegreeError for {size} control points")
        try:
            BezierTriangle(np.zeros((5, 2)))
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError for a non-triangular point count")
        print("successful")

    def test_partition_of_unity_property(self):
        print(" -> test_partition_of_unity_property: ", end="")
        rng = np.random.default_rng(14)
        for _ in range(200):
            degree = int(rng.integers(1, 11))
            s, t = random_parameters(rng, 1)[0]
            assert abs(bernstein_basis_triangle(degree, s, t).sum() - 1.0) <= 4 * np.finfo(float).eps * degree
        print("successful")

    def test_convex_hull_property(self):
        print(" -> test_convex_hull_property: ", end="")
        rng = np.random.default_rng(15)
        for _ in range(200):
            triangle = BezierTriangle(rng.uniform(-2.0, 2.0, size=(10, 2)))
            box = triangle.bounding_box().inflated(1e-12)
            points = triangle.evaluate_multi(random_parameters(rng, 5))
            assert all(box.contains(point) for point in points)
        print("successful")

    def test_locate_inverts_eval_property(self):
        print(" -> test_locate_inverts_eval_property: ", end="")
        parameters = random_parameters(np.random.default_rng(16), 200)
        for s, t in parameters:
            located = locate_point(QUADRATIC, QUADRATIC.evaluate(s, t))
            assert located is not None
            assert abs(located[0] - s) < 1e-9 and abs(located[1] - t) < 1e-9
        print("successful")


if __name__ == "__main__":
    TestBezierTriangle().main()
