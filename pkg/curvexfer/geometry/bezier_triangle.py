import logging
import math
from functools import lru_cache
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.special import factorial

from ..errors import DegreeError, ElementDegenerateError, LocatePointError
from ..settings import SettingsManager
from ..utility import as_points, cross_2d
from .bezier_curve import BezierCurve, BoundingBox, max_degree

logger = logging.getLogger(__name__)

# corners of the four children of U in parameter space, corner child 0 first, then middle, corner 1, corner 2
SUBDIVISION_CORNERS = np.array([
    [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)],
    [(0.5, 0.5), (0.0, 0.5), (0.5, 0.0)],
    [(0.5, 0.0), (1.0, 0.0), (0.5, 0.5)],
    [(0.0, 0.5), (0.5, 0.5), (0.0, 1.0)],
])
UNIT_CORNERS = np.array([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])


def net_size(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2


def degree_from_size(size: int) -> int:
    degree = int(round((math.sqrt(8 * size + 1) - 3) / 2))
    if net_size(degree) != size:
        raise ValueError(f"{size} points do not form a triangular control net")
    return degree


def net_index(degree: int, j: int, k: int) -> int:
    """ position of multi-index (i, j, k) in the lexicographic (k, j) storage order """
    return k * (degree + 1) - k * (k - 1) // 2 + j


@lru_cache(maxsize=None)
def multi_indices(degree: int) -> np.ndarray:
    """ (N, 3) array of (i, j, k) in storage order """
    rows = [(degree - j - k, j, k) for k in range(degree + 1) for j in range(degree + 1 - k)]
    indices = np.array(rows, dtype=int).reshape(-1, 3)
    indices.setflags(write=False)
    return indices


@lru_cache(maxsize=None)
def lattice(degree: int) -> np.ndarray:
    """ parameters (j/p, k/p) of the standard nodes in storage order """
    points = multi_indices(degree)[:, 1:] / max(degree, 1)
    if degree == 0:
        points = np.array([[1 / 3, 1 / 3]])
    points.setflags(write=False)
    return points


@lru_cache(maxsize=None)
def _reduction(degree: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ for a net of the given degree: the (j, k), (j + 1, k), (j, k + 1) positions feeding each point of the next lower degree """
    lower = multi_indices(degree - 1)
    j, k = lower[:, 1], lower[:, 2]
    return net_index(degree, j, k), net_index(degree, j + 1, k), net_index(degree, j, k + 1)


def de_casteljau_triangle(net: np.ndarray, s, t) -> np.ndarray:
    """ evaluate a net (N, d) at parameters s, t of shape (m,) -> (m, d) """
    s = np.asarray(s, dtype=np.float64)[..., None, None]
    t = np.asarray(t, dtype=np.float64)[..., None, None]
    r = 1.0 - s - t
    degree = degree_from_size(net.shape[0])
    work = np.broadcast_to(net, s.shape[:-2] + net.shape)
    for current in range(degree, 0, -1):
        a, b, c = _reduction(current)
        work = r * work[..., a, :] + s * work[..., b, :] + t * work[..., c, :]
    return work[..., 0, :]


def blossom_triangle(net: np.ndarray, parameters: np.ndarray) -> np.ndarray:
    """
    polar form of the net: parameters has shape (m, p, 2), one (s, t) per
    de Casteljau level for every output point; returns (m, d)
    """
    degree = degree_from_size(net.shape[0])
    work = np.broadcast_to(net, (parameters.shape[0],) + net.shape)
    for level, current in enumerate(range(degree, 0, -1)):
        a, b, c = _reduction(current)
        s = parameters[:, level, 0][:, None, None]
        t = parameters[:, level, 1][:, None, None]
        work = (1.0 - s - t) * work[:, a, :] + s * work[:, b, :] + t * work[:, c, :]
    return work[:, 0, :]


def specialize_net(net: np.ndarray, corners: np.ndarray) -> np.ndarray:
    """ net of the restriction to the parameter triangle with the given three corners (as (s, t) rows) """
    degree = degree_from_size(net.shape[0])
    if degree == 0:
        return np.array(net)
    parameters = []
    for i, j, k in multi_indices(degree):
        parameters.append([corners[0]] * i + [corners[1]] * j + [corners[2]] * k)
    return blossom_triangle(net, np.array(parameters, dtype=np.float64))


def derivative_nets(net: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """ nets of the partial derivatives d/ds and d/dt, one degree lower """
    degree = degree_from_size(net.shape[0])
    a, b, c = _reduction(degree)
    return degree * (net[b] - net[a]), degree * (net[c] - net[a])


@lru_cache(maxsize=None)
def _product_table(degree_0: int, degree_1: int):
    """ scatter table for multiplying two triangular Bernstein polynomials """
    indices_0 = multi_indices(degree_0)
    indices_1 = multi_indices(degree_1)
    degree = degree_0 + degree_1

    def multinomial(index):
        return factorial(index.sum(axis=-1)) / np.prod(factorial(index), axis=-1)

    combined = indices_0[:, None, :] + indices_1[None, :, :]
    weights = (multinomial(indices_0)[:, None] * multinomial(indices_1)[None, :]) / multinomial(combined)
    targets = net_index(degree, combined[..., 1], combined[..., 2])
    return targets.ravel(), weights.ravel()


def bernstein_product(coefficients_0: np.ndarray, coefficients_1: np.ndarray) -> np.ndarray:
    """ Bernstein coefficients of the product of two scalar triangular Bernstein polynomials """
    degree_0 = degree_from_size(coefficients_0.shape[0])
    degree_1 = degree_from_size(coefficients_1.shape[0])
    targets, weights = _product_table(degree_0, degree_1)
    product = np.zeros(net_size(degree_0 + degree_1))
    np.add.at(product, targets, weights * np.outer(coefficients_0, coefficients_1).ravel())
    return product


@lru_cache(maxsize=None)
def _lattice_factorisation(degree: int):
    """ LU factors of the Bernstein collocation matrix at the standard lattice """
    basis = bernstein_basis_triangle(degree, lattice(degree)[:, 0], lattice(degree)[:, 1])
    condition = np.linalg.cond(basis)
    if condition > SettingsManager.get("mesh", "condition_limit"):
        raise ElementDegenerateError(None, f"lattice collocation matrix of degree {degree} has condition number {condition:.3g}")
    return lu_factor(basis)


def bernstein_basis_triangle(degree: int, s, t) -> np.ndarray:
    """ values of every B_{i,j,k} (storage order) at the parameters, shape (m, N) """
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))[:, None]
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))[:, None]
    indices = multi_indices(degree)
    i, j, k = indices[:, 0], indices[:, 1], indices[:, 2]
    coefficients = factorial(degree) / (factorial(i) * factorial(j) * factorial(k))
    return coefficients * (1.0 - s - t) ** i * s ** j * t ** k


class StandardNodes(NamedTuple):
    """ images n_{i,j,k} = b(j/p, k/p) of the uniform lattice, storage order """
    degree: int
    nodes: np.ndarray


class BezierTriangle:
    """
    Bezier triangle b(s, t) = sum B_{i,j,k}(s, t) p_{i,j,k} over the unit triangle U.

    The control net is stored in lexicographic (k, j) order as a read-only
    (N, 2) array. Triangles built with from_nodes keep the given standard
    nodes, so writing the nodes back out reproduces them bitwise.
    """

    __slots__ = ("_net", "_degree", "_nodes", "_box", "_affine", "_edges")

    def __init__(self, control_net, nodes: Optional[np.ndarray] = None):
        control_net = as_points(control_net, name="control net")
        degree = degree_from_size(control_net.shape[0])
        limit = max_degree()
        if not 1 <= degree <= limit:
            raise DegreeError(degree, limit, kind="triangle")
        self._net = control_net
        self._degree = degree
        self._nodes = nodes
        self._box = None
        self._affine = None
        self._edges = None

    @classmethod
    def from_nodes(cls, nodes) -> "BezierTriangle":
        if isinstance(nodes, StandardNodes):
            nodes = nodes.nodes
        nodes = as_points(nodes, name="standard nodes")
        degree = degree_from_size(nodes.shape[0])
        if degree == 1:
            return cls(nodes, nodes=nodes)
        net = lu_solve(_lattice_factorisation(degree), nodes)
        return cls(net, nodes=nodes)

    @property
    def control_net(self) -> np.ndarray:
        return self._net

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def corners(self) -> np.ndarray:
        p = self._degree
        return self._net[[0, p, net_size(p) - 1]]

    @property
    def nodes(self) -> np.ndarray:
        if self._nodes is None:
            nodes = de_casteljau_triangle(self._net, lattice(self._degree)[:, 0], lattice(self._degree)[:, 1])
            nodes.setflags(write=False)
            self._nodes = nodes
        return self._nodes

    def __repr__(self) -> str:
        return f"BezierTriangle(degree={self._degree}, control_net={self._net.tolist()})"

    def evaluate(self, s: float, t: float) -> np.ndarray:
        return eval_triangle(self, s, t)

    def evaluate_multi(self, parameters) -> np.ndarray:
        parameters = np.asarray(parameters, dtype=np.float64).reshape(-1, 2)
        return de_casteljau_triangle(self._net, parameters[:, 0], parameters[:, 1])

    def bounding_box(self) -> BoundingBox:
        if self._box is None:
            self._box = BoundingBox.of_points(self._net)
        return self._box

    @property
    def diameter(self) -> float:
        return self.bounding_box().diameter

    def is_affine(self) -> bool:
        """ true when the net is the degree-elevated net of the corner triangle """
        if self._affine is None:
            p0, p1, p2 = self.corners
            parameters = lattice(self._degree)
            linear = p0 + parameters[:, :1] * (p1 - p0) + parameters[:, 1:] * (p2 - p0)
            self._affine = bool(np.max(np.abs(linear - self._net)) <= 1e-13 * max(self.diameter, np.finfo(float).tiny))
        return self._affine

    def edges(self) -> Tuple[BezierCurve, BezierCurve, BezierCurve]:
        if self._edges is None:
            self._edges = edges(self)
        return self._edges

    def jacobian_det(self, s, t):
        return jacobian_det(self, s, t)


def eval_triangle(T: BezierTriangle, s: float, t: float) -> np.ndarray:
    if s == 0.0 and t == 0.0:
        return T.control_net[0].copy()
    return de_casteljau_triangle(T.control_net, np.float64(s), np.float64(t))


def net_to_nodes(T: BezierTriangle) -> StandardNodes:
    return StandardNodes(T.degree, T.nodes)


def nodes_to_net(nodes: StandardNodes) -> BezierTriangle:
    return BezierTriangle.from_nodes(nodes)


def edges(T: BezierTriangle) -> Tuple[BezierCurve, BezierCurve, BezierCurve]:
    """ bottom b(r, 0), hypotenuse b(1 - r, r) and left b(0, 1 - r), counterclockwise in U """
    p = T.degree
    net = T.control_net
    bottom = [net_index(p, j, 0) for j in range(p + 1)]
    hypotenuse = [net_index(p, p - m, m) for m in range(p + 1)]
    left = [net_index(p, 0, p - m) for m in range(p + 1)]
    return BezierCurve(net[bottom]), BezierCurve(net[hypotenuse]), BezierCurve(net[left])


def jacobian_det(T: BezierTriangle, s, t):
    """ det(Db) = x_s y_t - x_t y_s, scalar or array depending on the inputs """
    ds, dt = derivative_nets(T.control_net)
    scalar = np.ndim(s) == 0 and np.ndim(t) == 0
    values_s = de_casteljau_triangle(ds, np.atleast_1d(s), np.atleast_1d(t))
    values_t = de_casteljau_triangle(dt, np.atleast_1d(s), np.atleast_1d(t))
    det = cross_2d(values_s, values_t)
    return float(det[0]) if scalar else det


def jacobian_bernstein(T: BezierTriangle) -> np.ndarray:
    """ Bernstein coefficients of det(Db), a polynomial of degree 2(p - 1) """
    ds, dt = derivative_nets(T.control_net)
    return bernstein_product(ds[:, 0], dt[:, 1]) - bernstein_product(dt[:, 0], ds[:, 1])


def _positive_by_subdivision(coefficients: np.ndarray, levels: int) -> bool:
    if np.all(coefficients > 0.0):
        return True
    degree = degree_from_size(coefficients.shape[0])
    if min(coefficients[0], coefficients[degree], coefficients[-1]) <= 0.0 or levels == 0:
        return False
    column = coefficients[:, None]
    return all(_positive_by_subdivision(specialize_net(column, corners)[:, 0], levels - 1)
               for corners in SUBDIVISION_CORNERS)


def is_valid(T: BezierTriangle) -> bool:
    """ positivity of det(Db) on U, certified on its Bernstein coefficients """
    coefficients = jacobian_bernstein(T)
    if np.all(coefficients > 0.0):
        return True
    samples = lattice(T.degree + 1)
    if np.any(jacobian_det(T, samples[:, 0], samples[:, 1]) <= 0.0):
        return False
    levels = SettingsManager.get("validity", "subdivision_levels")
    result = _positive_by_subdivision(coefficients, levels)
    if not result:
        logger.debug(f"determinant positivity not certified after {levels} subdivision levels")
    return result


def area(T: BezierTriangle) -> float:
    """ integral of det(Db) over U; every Bernstein polynomial of degree q integrates to 1 / ((q + 1)(q + 2)) """
    coefficients = jacobian_bernstein(T)
    q = 2 * (T.degree - 1)
    return float(coefficients.sum() / ((q + 1) * (q + 2)))


def specialize_triangle(T: BezierTriangle, corners) -> BezierTriangle:
    """ triangle c with c(s, t) = T(u0 + s (u1 - u0) + t (u2 - u0)) for parameter corners u0, u1, u2 """
    corners = np.asarray(corners, dtype=np.float64).reshape(3, 2)
    return BezierTriangle(specialize_net(T.control_net, corners))


def subdivide_triangle(T: BezierTriangle) -> List[BezierTriangle]:
    return [specialize_triangle(T, corners) for corners in SUBDIVISION_CORNERS]


def _newton_locate(T: BezierTriangle, q: np.ndarray, s: float, t: float):
    max_iterations = SettingsManager.get("locate_point", "newton_max_iterations")
    tolerance = SettingsManager.get("locate_point", "newton_tolerance")
    ds, dt = derivative_nets(T.control_net)
    for iteration in range(max_iterations):
        residual = eval_triangle(T, s, t) - q
        column_s = de_casteljau_triangle(ds, np.float64(s), np.float64(t))
        column_t = de_casteljau_triangle(dt, np.float64(s), np.float64(t))
        det = column_s[0] * column_t[1] - column_t[0] * column_s[1]
        if det == 0.0:
            return s, t, False
        delta_s = (residual[0] * column_t[1] - column_t[0] * residual[1]) / det
        delta_t = (column_s[0] * residual[1] - residual[0] * column_s[1]) / det
        s, t = s - delta_s, t - delta_t
        if abs(s) > 4.0 or abs(t) > 4.0:
            return s, t, False
        if max(abs(delta_s), abs(delta_t)) < tolerance:
            return s, t, True
    return s, t, False


def _in_domain(s: float, t: float, slack: float) -> bool:
    return s >= -slack and t >= -slack and s + t <= 1.0 + slack


def _clamp_to_domain(s: float, t: float) -> Tuple[float, float]:
    s, t = max(s, 0.0), max(t, 0.0)
    total = s + t
    if total > 1.0:
        s, t = s / total, t / total
    return s, t


def _locate_affine(T: BezierTriangle, q: np.ndarray, slack: float):
    p0, p1, p2 = T.corners
    matrix = np.column_stack([p1 - p0, p2 - p0])
    s, t = np.linalg.solve(matrix, q - p0)
    if not _in_domain(s, t, slack):
        return None
    return _clamp_to_domain(float(s), float(t))


def locate_point(T: BezierTriangle, q) -> Optional[Tuple[float, float]]:
    """
    Parameters (s, t) in U with T(s, t) = q, or None when q is not in T.

    Cells of U whose subdivided net has a bounding box containing q are split
    until their side is small, then Newton's method is run from the cell
    centre. LocatePointError is raised only if an iterate stays in U but
    never converges.
    """
    q = np.asarray(q, dtype=np.float64)
    slack = SettingsManager.get("locate_point", "domain_slack")
    diameter = T.diameter
    if not T.bounding_box().inflated(SettingsManager.get("locate_point", "box_inflation") * diameter).contains(q):
        return None
    if T.is_affine():
        return _locate_affine(T, q, slack)

    inflation = SettingsManager.get("locate_point", "box_inflation") * diameter
    cell_size = SettingsManager.get("locate_point", "newton_cell_size")
    residual_tolerance = SettingsManager.get("locate_point", "residual_tolerance") * diameter

    stack = [(T.control_net, UNIT_CORNERS, 1.0)]
    stalled = None
    while stack:
        net, corners, side = stack.pop()
        if not BoundingBox.of_points(net).inflated(inflation).contains(q):
            continue
        if side > cell_size:
            for child in SUBDIVISION_CORNERS[::-1]:
                child_corners = corners[0] + child[:, :1] * (corners[1] - corners[0]) + child[:, 1:] * (corners[2] - corners[0])
                stack.append((specialize_net(net, child), child_corners, side / 2))
            continue

        centre = corners.mean(axis=0)
        s, t, converged = _newton_locate(T, q, float(centre[0]), float(centre[1]))
        if not _in_domain(s, t, slack):
            continue
        if np.hypot(*(eval_triangle(T, s, t) - q)) <= residual_tolerance:
            return _clamp_to_domain(s, t)
        if not converged:
            stalled = (s, t)

    if stalled is not None:
        raise LocatePointError(q, stalled)
    return None


def contains_point(T: BezierTriangle, q) -> bool:
    return locate_point(T, q) is not None
