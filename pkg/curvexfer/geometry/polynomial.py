from typing import Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.signal import convolve2d
from scipy.special import comb


def _frame_matrix(degree: int, ratio: float, offset: float) -> np.ndarray:
    """ M[i, a] = C(a, i) ratio^i offset^(a - i), so X_old^a = sum_i M[i, a] X_new^i """
    a = np.arange(degree + 1)
    i = a[:, None]
    exponent = np.clip(a[None, :] - i, 0, None)
    return np.where(i <= a[None, :], comb(a[None, :], i) * ratio ** i * offset ** exponent, 0.0)


class BivariatePolynomial:
    """
    F(x, y) = sum_{a + b <= d} C[a, b] X^a Y^b with X = (x - cx) / h, Y = (y - cy) / h.

    The local frame (centre, scale) keeps element-sized polynomials well
    conditioned. Coefficients are stored as a (d + 1, d + 1) array whose
    entries below the anti-diagonal hold the monomials of total degree <= d.
    """

    __slots__ = ("_coefficients", "_center", "_scale", "_degree")

    def __init__(self, coefficients, center: Sequence[float] = (0.0, 0.0), scale: float = 1.0,
                 degree: Optional[int] = None):
        coefficients = np.atleast_2d(np.array(coefficients, dtype=np.float64))
        size = max(coefficients.shape)
        if coefficients.shape != (size, size):
            square = np.zeros((size, size))
            square[:coefficients.shape[0], :coefficients.shape[1]] = coefficients
            coefficients = square
        if scale <= 0.0:
            raise ValueError(f"frame scale must be positive, got {scale}")
        self._coefficients = coefficients
        self._coefficients.setflags(write=False)
        self._center = np.array(center, dtype=np.float64).reshape(2)
        self._center.setflags(write=False)
        self._scale = float(scale)
        self._degree = size - 1 if degree is None else int(degree)

    @classmethod
    def constant(cls, value: float, center=(0.0, 0.0), scale: float = 1.0) -> "BivariatePolynomial":
        return cls([[value]], center, scale)

    @classmethod
    def from_terms(cls, terms: dict) -> "BivariatePolynomial":
        """ global-frame polynomial from {(a, b): coefficient of x^a y^b} """
        degree = max(a + b for a, b in terms)
        coefficients = np.zeros((degree + 1, degree + 1))
        for (a, b), value in terms.items():
            coefficients[a, b] = value
        return cls(coefficients)

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefficients

    @property
    def center(self) -> np.ndarray:
        return self._center

    @property
    def scale(self) -> float:
        return self._scale

    @property
    def degree(self) -> int:
        """ total degree used for quadrature bookkeeping """
        return self._degree

    def __repr__(self) -> str:
        return f"BivariatePolynomial(degree={self._degree}, center={self._center.tolist()}, scale={self._scale})"

    def local(self, x, y):
        return (np.asarray(x, dtype=np.float64) - self._center[0]) / self._scale, \
               (np.asarray(y, dtype=np.float64) - self._center[1]) / self._scale

    def evaluate(self, x, y):
        local_x, local_y = self.local(x, y)
        return P.polyval2d(local_x, local_y, self._coefficients)

    __call__ = evaluate

    def same_frame(self, other: "BivariatePolynomial") -> bool:
        return self._scale == other._scale and np.array_equal(self._center, other._center)

    def reframed(self, center: Sequence[float], scale: float) -> "BivariatePolynomial":
        """ the same polynomial expressed in another local frame """
        center = np.array(center, dtype=np.float64).reshape(2)
        if scale == self._scale and np.array_equal(center, self._center):
            return self
        ratio = scale / self._scale
        offset = (center - self._center) / self._scale
        size = self._coefficients.shape[0] - 1
        matrix_x = _frame_matrix(size, ratio, offset[0])
        matrix_y = _frame_matrix(size, ratio, offset[1])
        return BivariatePolynomial(matrix_x @ self._coefficients @ matrix_y.T, center, scale, self._degree)

    def shifted(self, dx: float, dy: float) -> "BivariatePolynomial":
        """ G(x, y) = F(x - dx, y - dy) """
        return BivariatePolynomial(self._coefficients, self._center + (dx, dy), self._scale, self._degree)

    def _coerce(self, other: "BivariatePolynomial") -> np.ndarray:
        if not self.same_frame(other):
            other = other.reframed(self._center, self._scale)
        return other._coefficients

    def __add__(self, other: Union["BivariatePolynomial", float]) -> "BivariatePolynomial":
        if not isinstance(other, BivariatePolynomial):
            other = BivariatePolynomial.constant(float(other), self._center, self._scale)
        coefficients = self._coerce(other)
        size = max(coefficients.shape[0], self._coefficients.shape[0])
        total = np.zeros((size, size))
        total[:self._coefficients.shape[0], :self._coefficients.shape[0]] += self._coefficients
        total[:coefficients.shape[0], :coefficients.shape[0]] += coefficients
        return BivariatePolynomial(total, self._center, self._scale, max(self._degree, other._degree))

    __radd__ = __add__

    def __neg__(self) -> "BivariatePolynomial":
        return BivariatePolynomial(-self._coefficients, self._center, self._scale, self._degree)

    def __sub__(self, other) -> "BivariatePolynomial":
        return self + (-other)

    def __mul__(self, other: Union["BivariatePolynomial", float]) -> "BivariatePolynomial":
        if not isinstance(other, BivariatePolynomial):
            return BivariatePolynomial(float(other) * self._coefficients, self._center, self._scale, self._degree)
        product = convolve2d(self._coefficients, self._coerce(other))
        return BivariatePolynomial(product, self._center, self._scale, self._degree + other._degree)

    __rmul__ = __mul__

    def antiderivative_x(self, lower: float) -> "BivariatePolynomial":
        """ H(x, y) = integral of F(xi, y) for xi from lower to x """
        bound = (lower - self._center[0]) / self._scale
        coefficients = P.polyint(self._coefficients, m=1, lbnd=bound, scl=self._scale, axis=0)
        return BivariatePolynomial(coefficients, self._center, self._scale, self._degree + 1)

    def antiderivative_y(self, lower: float) -> "BivariatePolynomial":
        """ V(x, y) = integral of F(x, eta) for eta from lower to y """
        bound = (lower - self._center[1]) / self._scale
        coefficients = P.polyint(self._coefficients, m=1, lbnd=bound, scl=self._scale, axis=1)
        return BivariatePolynomial(coefficients, self._center, self._scale, self._degree + 1)
