import logging
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..errors import ElementDegenerateError
from ..geometry.bezier_triangle import BezierTriangle
from ..geometry.polynomial import BivariatePolynomial
from ..settings import SettingsManager

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def monomial_exponents(degree: int) -> np.ndarray:
    """ (M, 2) exponents (a, b) with a + b <= degree, ordered by total degree """
    exponents = np.array([(total - b, b) for total in range(degree + 1) for b in range(total + 1)], dtype=int)
    exponents.setflags(write=False)
    return exponents


def monomials(degree: int, local_x, local_y) -> np.ndarray:
    """ X^a Y^b for every exponent, stacked on a new last axis """
    exponents = monomial_exponents(degree)
    local_x = np.asarray(local_x, dtype=np.float64)[..., None]
    local_y = np.asarray(local_y, dtype=np.float64)[..., None]
    return local_x ** exponents[:, 0] * local_y ** exponents[:, 1]


class ShapeBasis:
    """
    Global-coordinates basis of one element: polynomials phi_j of degree p in
    (x, y) with phi_j(n_i) = delta_ij at the element's standard nodes.

    The polynomials live in a local frame centred on the nodes and scaled by
    their spread, which keeps the interpolation system well conditioned.
    """

    def __init__(self, element: BezierTriangle, element_id: Optional[int] = None):
        self.degree = element.degree
        nodes = element.nodes
        self.center = nodes.mean(axis=0)
        self.scale = float(np.max(np.linalg.norm(nodes - self.center, axis=1)))
        if self.scale == 0.0:
            raise ElementDegenerateError(element_id, "all standard nodes coincide")

        vandermonde = monomials(self.degree, *self.local(nodes[:, 0], nodes[:, 1]).T)
        condition = np.linalg.cond(vandermonde)
        limit = SettingsManager.get("mesh", "condition_limit")
        if not np.isfinite(condition) or condition > limit:
            raise ElementDegenerateError(element_id, f"node interpolation matrix has condition number {condition:.3g}")
        if condition > 1e-3 * limit:
            logger.warning(f"element {element_id} has an ill-conditioned shape basis (condition number {condition:.3g})")

        # column j holds the monomial coefficients of phi_j
        self.coefficients = lu_solve(lu_factor(vandermonde), np.eye(vandermonde.shape[0]))
        self.coefficients.setflags(write=False)

    @property
    def size(self) -> int:
        return self.coefficients.shape[1]

    def local(self, x, y) -> np.ndarray:
        return np.stack([(np.asarray(x, dtype=np.float64) - self.center[0]) / self.scale,
                         (np.asarray(y, dtype=np.float64) - self.center[1]) / self.scale], axis=-1)

    def evaluate(self, x, y) -> np.ndarray:
        """ all basis functions at the points, shape (..., N) """
        local = self.local(x, y)
        return monomials(self.degree, local[..., 0], local[..., 1]) @ self.coefficients

    __call__ = evaluate

    def combination(self, weights) -> BivariatePolynomial:
        """ sum_j weights[j] phi_j as a polynomial in this basis' frame """
        monomial_weights = self.coefficients @ np.asarray(weights, dtype=np.float64)
        array = np.zeros((self.degree + 1, self.degree + 1))
        exponents = monomial_exponents(self.degree)
        array[exponents[:, 0], exponents[:, 1]] = monomial_weights
        return BivariatePolynomial(array, self.center, self.scale, self.degree)

    def function(self, index: int) -> BivariatePolynomial:
        return self.combination(np.eye(self.size)[index])


def build_shape_basis(T: BezierTriangle, element_id: Optional[int] = None) -> ShapeBasis:
    return ShapeBasis(T, element_id)
