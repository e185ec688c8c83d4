import numpy as np

from curvexfer.geometry import BivariatePolynomial

POINTS_X = np.array([-1.5, 0.0, 0.25, 2.0, 3.0])
POINTS_Y = np.array([2.0, -0.5, 1.0, 0.0, 4.0])


def cubic(x, y):
    return 1.0 + 2.0 * x - y + x * y ** 2 + 0.5 * x ** 3


def primitive(x, y):
    """ antiderivative of cubic in x """
    return x + x ** 2 - y * x + 0.5 * x ** 2 * y ** 2 + x ** 4 / 8.0


CUBIC = BivariatePolynomial.from_terms({(0, 0): 1.0, (1, 0): 2.0, (0, 1): -1.0, (1, 2): 1.0, (3, 0): 0.5})


class TestPolynomial:
    def main(self):
        self.execute_tests()

    def execute_tests(self):
        print(f"\n{self.__class__.__name__} started:")
        self.test_evaluate()
        self.test_local_frame()
        self.test_reframed()
        self.test_arithmetic()
        self.test_antiderivatives()
        self.test_shifted()
        self.test_invalid_scale()

    def test_evaluate(self):
        print(" -> test_evaluate: ", end="")
        assert CUBIC.degree == 3
        np.testing.assert_allclose(CUBIC.evaluate(POINTS_X, POINTS_Y), cubic(POINTS_X, POINTS_Y), atol=1e-13)
        assert CUBIC(2.0, 3.0) == cubic(2.0, 3.0)
        assert BivariatePolynomial.constant(4.0).evaluate(1.0, 7.0) == 4.0
        # the tracked degree defaults to the coefficient array size and can be given explicitly
        assert BivariatePolynomial([[1.0, 2.0], [3.0, 0.0]]).degree == 1
        assert BivariatePolynomial([[1.0, 2.0], [3.0, 0.0]], degree=None).degree == 1
        assert BivariatePolynomial([[1.0, 0.0], [0.0, 0.0]], degree=0).degree == 0
        print("successful")

    def test_local_frame(self):
        print(" -> test_local_frame: ", end="")
        # X + Y with X = (x - 1) / 0.5 and Y = (y - 2) / 0.5
        p = BivariatePolynomial([[0.0, 1.0], [1.0, 0.0]], center=(1.0, 2.0), scale=0.5)
        assert p.evaluate(1.5, 2.0) == 1.0
        assert p.evaluate(1.0, 3.0) == 2.0
        print("successful")

    def test_reframed(self):
        print(" -> test_reframed: ", end="")
        moved = CUBIC.reframed((1.0, -2.0), 0.25)
        assert moved.degree == CUBIC.degree and not moved.same_frame(CUBIC)
        np.testing.assert_allclose(moved.evaluate(POINTS_X, POINTS_Y), cubic(POINTS_X, POINTS_Y), rtol=1e-12)
        assert CUBIC.reframed((0.0, 0.0), 1.0) is CUBIC
        print("successful")

    def test_arithmetic(self):
        print(" -> test_arithmetic: ", end="")
        other = BivariatePolynomial([[1.0, 2.0], [3.0, 0.0]], center=(0.5, 0.5), scale=2.0)
        values = other.evaluate(POINTS_X, POINTS_Y)
        np.testing.assert_allclose((CUBIC + other).evaluate(POINTS_X, POINTS_Y), cubic(POINTS_X, POINTS_Y) + values,
                                   atol=1e-12)
        np.testing.assert_allclose((CUBIC - other).evaluate(POINTS_X, POINTS_Y), cubic(POINTS_X, POINTS_Y) - values,
                                   atol=1e-12)
        product = CUBIC * other
        assert product.degree == 4
        np.testing.assert_allclose(product.evaluate(POINTS_X, POINTS_Y), cubic(POINTS_X, POINTS_Y) * values,
                                   rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose((2.0 * CUBIC + 1.0).evaluate(POINTS_X, POINTS_Y),
                                   2.0 * cubic(POINTS_X, POINTS_Y) + 1.0, atol=1e-12)
        print("successful")

    def test_antiderivatives(self):
        print(" -> test_antiderivatives: ", end="")
        xy = BivariatePolynomial.from_terms({(1, 1): 1.0})
        assert abs(xy.antiderivative_x(1.0).evaluate(3.0, 2.0) - 8.0) < 1e-14
        assert abs(xy.antiderivative_y(-1.0).evaluate(2.0, 3.0) - 8.0) < 1e-14
        assert xy.antiderivative_x(0.0).degree == 3

        framed = CUBIC.reframed((0.5, 1.0), 3.0)
        h = framed.antiderivative_x(-1.0)
        for x, y in zip(POINTS_X, POINTS_Y):
            reference = primitive(x, y) - primitive(-1.0, y)
            assert abs(h.evaluate(x, y) - reference) < 1e-12 * max(abs(reference), 1.0)
        print("successful")

    def test_shifted(self):
        print(" -> test_shifted: ", end="")
        shifted = CUBIC.shifted(1.0, -2.0)
        np.testing.assert_allclose(shifted.evaluate(POINTS_X, POINTS_Y), cubic(POINTS_X - 1.0, POINTS_Y + 2.0),
                                   atol=1e-12)
        print("successful")

    def test_invalid_scale(self):
        print(" -> test_invalid_scale: ", end="")
        try:
            BivariatePolynomial([[1.0]], scale=0.0)
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
        print("successful")


if __name__ == "__main__":
    TestPolynomial().main()
