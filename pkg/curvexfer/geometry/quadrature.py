import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi


class LineRule(NamedTuple):
    """ nodes on [0, 1], weights sum to 1 """
    nodes: np.ndarray
    weights: np.ndarray


class TriangleRule(NamedTuple):
    """ points (m, 2) in the unit triangle U, weights sum to the area of U (1/2) """
    points: np.ndarray
    weights: np.ndarray
    degree: int


def _frozen(*arrays):
    for array in arrays:
        array.setflags(write=False)
    return arrays


@lru_cache(maxsize=None)
def gauss_legendre(node_count: int) -> LineRule:
    """ Gauss-Legendre rule on the unit interval, exact for polynomials of degree 2 * node_count - 1 """
    if node_count < 1:
        raise ValueError(f"node count must be positive, got {node_count}")
    points, weights = leggauss(node_count)
    nodes, weights = _frozen((1.0 + points) / 2.0, weights / 2.0)
    return LineRule(nodes, weights)


def gauss_legendre_for_degree(degree: int) -> LineRule:
    return gauss_legendre(max(math.ceil((degree + 1) / 2), 1))


def _symmetric_rule(orbits, degree: int) -> TriangleRule:
    """ orbits: (a, weight) expands to the barycentric points (a, a, 1 - 2a) and permutations, a = 1/3 is the centroid """
    points, weights = [], []
    for a, weight in orbits:
        b = 1.0 - 2.0 * a
        orbit = [(a, a)] if a == 1 / 3 else [(a, a), (a, b), (b, a)]
        points.extend(orbit)
        weights.extend([weight] * len(orbit))
    points = np.array(points)
    weights = 0.5 * np.array(weights)
    return TriangleRule(*_frozen(points, weights), degree)


_SYMMETRIC_ORBITS = {
    1: [(1 / 3, 1.0)],
    2: [(1 / 6, 1 / 3)],
    4: [(0.445948490915965, 0.223381589678011),
        (0.091576213509771, 0.109951743655322)],
    5: [(1 / 3, 0.225),
        (0.470142064105115, 0.132394152788506),
        (0.101286507323456, 0.125939180544827)],
}


@lru_cache(maxsize=None)
def collapsed_gauss_jacobi(degree: int) -> TriangleRule:
    """
    Tensor rule on U from the Duffy collapse s = (1 - t)(1 + u) / 2, t = (1 + v) / 2.

    The collapse contributes the factor (1 - v) / 8, which is absorbed by a
    Gauss-Jacobi rule with alpha = 1, beta = 0 in v. Exact for total degree.
    """
    n = max(math.ceil((degree + 1) / 2), 1)
    u, w_u = leggauss(n)
    v, w_v = roots_jacobi(n, 1.0, 0.0)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    t = (1.0 + vv) / 2.0
    s = (1.0 - t) * (1.0 + uu) / 2.0
    points = np.column_stack([s.ravel(), t.ravel()])
    weights = np.outer(w_u, w_v).ravel() / 8.0
    return TriangleRule(*_frozen(points, weights), degree)


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> TriangleRule:
    """ quadrature rule on U exact for polynomials of total degree <= degree """
    if degree < 0:
        raise ValueError(f"quadrature degree must be non-negative, got {degree}")
    for table_degree in sorted(_SYMMETRIC_ORBITS):
        if degree <= table_degree:
            return _symmetric_rule(_SYMMETRIC_ORBITS[table_degree], table_degree)
    return collapsed_gauss_jacobi(degree)


def integrate_on_unit_triangle(function, degree: int) -> np.ndarray:
    """ integral over U of function(s, t), vectorised over the quadrature points; trailing output axes are kept """
    rule = triangle_rule(degree)
    values = np.asarray(function(rule.points[:, 0], rule.points[:, 1]))
    return np.tensordot(rule.weights, values, axes=(0, 0))
