import logging
import math
from typing import Callable, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from ..settings import SettingsManager
from .bezier_curve import BezierCurve, BoundingBox, elevate_to, evaluate_multi, linear_curve
from .bezier_triangle import BezierTriangle, de_casteljau_triangle, jacobian_det, lattice, net_index
from .kernels import green_edge_sum
from .polynomial import BivariatePolynomial
from .quadrature import gauss_legendre, triangle_rule

logger = logging.getLogger(__name__)

Integrand = Union[BivariatePolynomial, Callable]


class SegmentSource(NamedTuple):
    """ where a polygon segment comes from: edge edge_index of triangle owner, restricted to [start, end] """
    owner: int
    edge_index: int
    start: float
    end: float


class CurvedPolygon:
    """
    Region bounded by a closed, counterclockwise loop of Bezier curves.

    Construction checks that consecutive segments meet (relative to the
    diameter of the loop) and that the enclosed signed area is positive.
    """

    def __init__(self, segments: Sequence[BezierCurve], sources: Optional[Sequence[SegmentSource]] = None,
                 validate: bool = True):
        if len(segments) < 2:
            raise ValueError(f"a curved polygon needs at least 2 segments, got {len(segments)}")
        if sources is not None and len(sources) != len(segments):
            raise ValueError("every segment needs exactly one source")
        self._segments = tuple(segments)
        self._sources = None if sources is None else tuple(sources)
        self._box = BoundingBox.of_points(np.vstack([segment.control_points for segment in self._segments]))
        self._area = None

        if validate:
            tolerance = SettingsManager.get("curved_polygon", "closure_tolerance") * max(self._box.diameter, 1.0)
            for index, segment in enumerate(self._segments):
                following = self._segments[(index + 1) % len(self._segments)]
                gap = float(np.linalg.norm(segment.end - following.start))
                if gap > tolerance:
                    raise ValueError(f"segment {index} ends at {tuple(segment.end)} but segment "
                                     f"{(index + 1) % len(self._segments)} starts at {tuple(following.start)}")
            if self.area <= 0.0:
                raise ValueError(f"curved polygon must be counterclockwise, signed area is {self.area}")

    @property
    def segments(self):
        return self._segments

    @property
    def sources(self):
        return self._sources

    def bounding_box(self) -> BoundingBox:
        return self._box

    @property
    def vertices(self) -> np.ndarray:
        return np.array([segment.start for segment in self._segments])

    @property
    def area(self) -> float:
        if self._area is None:
            self._area = float(integrate(self, BivariatePolynomial.constant(1.0)))
        return self._area

    def __len__(self) -> int:
        return len(self._segments)

    def __repr__(self) -> str:
        return f"CurvedPolygon(segments={len(self._segments)}, area={self.area:.6g})"


def area(P: CurvedPolygon) -> float:
    return P.area


def _as_function(F: Integrand, degree: Optional[int]):
    if isinstance(F, BivariatePolynomial):
        return F.evaluate, F.degree if degree is None else degree
    if degree is None:
        raise ValueError("the polynomial degree of a callable integrand must be given")
    return F, degree


def _trailing(array: np.ndarray, dimensions: int) -> np.ndarray:
    return array.reshape(array.shape + (1,) * dimensions)


def _antiderivative_nodes(function, lower, upper, fixed, degree: int, along_x: bool) -> np.ndarray:
    """ integral of function along one coordinate from lower to upper (arrays of shape (n,)), the other coordinate fixed """
    rule = gauss_legendre(max(math.ceil((degree + 2) / 2), 1))
    length = upper - lower
    moving = lower[:, None] + length[:, None] * rule.nodes[None, :]
    still = np.broadcast_to(fixed[:, None], moving.shape)
    values = np.asarray(function(moving, still) if along_x else function(still, moving))
    extra = values.ndim - 2
    return _trailing(length, extra) * np.tensordot(values, rule.weights, axes=(1, 0)).reshape((len(lower),) + values.shape[2:])


def eval_antiderivative_h(F: Integrand, m: float, alpha: float, beta: float, degree: Optional[int] = None):
    """ H(alpha, beta) = integral of F(x, beta) for x from m to alpha """
    function, degree = _as_function(F, degree)
    result = _antiderivative_nodes(function, np.array([m], dtype=float), np.array([alpha], dtype=float),
                                   np.array([beta], dtype=float), degree, along_x=True)
    return result[0]


def eval_antiderivative_v(F: Integrand, m: float, alpha: float, beta: float, degree: Optional[int] = None):
    """ V(alpha, beta) = integral of F(alpha, y) for y from m to beta """
    function, degree = _as_function(F, degree)
    result = _antiderivative_nodes(function, np.array([m], dtype=float), np.array([beta], dtype=float),
                                   np.array([alpha], dtype=float), degree, along_x=False)
    return result[0]


def integrate(P: CurvedPolygon, F: Integrand, degree: Optional[int] = None,
              m: Optional[float] = None, m_vertical: Optional[float] = None):
    """
    Integral of F over P as half of the boundary integral of H dy - V dx.

    F is a BivariatePolynomial or a vectorised callable f(x, y) together with
    its total degree; callables may return extra trailing axes (for example
    one value per basis function), which are kept in the result. The lower
    limits m and m_vertical default to the smallest control point coordinates.
    """
    function, degree = _as_function(F, degree)
    points = np.vstack([segment.control_points for segment in P.segments])
    m = float(points[:, 0].min()) if m is None else m
    m_vertical = float(points[:, 1].min()) if m_vertical is None else m_vertical

    total = 0.0
    for segment in P.segments:
        q = segment.degree
        rule = gauss_legendre(max(math.ceil((q * (degree + 1) + q) / 2), 1))
        xy = evaluate_multi(segment, rule.nodes)
        derivative = evaluate_multi(segment.hodograph(), rule.nodes) if q > 0 else np.zeros_like(xy)
        x, y = xy[:, 0], xy[:, 1]
        h = _antiderivative_nodes(function, np.full_like(x, m), x, y, degree, along_x=True)
        v = _antiderivative_nodes(function, np.full_like(y, m_vertical), y, x, degree, along_x=False)
        flat = (len(x), -1)
        sums = green_edge_sum(np.ascontiguousarray(rule.weights, dtype=np.float64),
                              np.ascontiguousarray(h.reshape(flat), dtype=np.float64),
                              np.ascontiguousarray(v.reshape(flat), dtype=np.float64),
                              np.ascontiguousarray(derivative[:, 0]), np.ascontiguousarray(derivative[:, 1]))
        total = total + sums.reshape(h.shape[1:])
    return 0.5 * total


def fan_triangle(apex, segment: BezierCurve) -> BezierTriangle:
    """
    Bezier triangle with corners apex, segment.start, segment.end whose
    hypotenuse is the segment and whose other edges are straight; the
    interior control points come from the affine map of the corners.
    """
    degree = max(segment.degree, 1)
    segment = elevate_to(segment, degree)
    apex = np.asarray(apex, dtype=np.float64)
    parameters = lattice(degree)
    net = apex + parameters[:, :1] * (segment.start - apex) + parameters[:, 1:] * (segment.end - apex)
    net = np.array(net)
    for m in range(degree + 1):
        net[net_index(degree, degree - m, m)] = segment.control_points[m]
    return BezierTriangle(net)


def tessellation_crosscheck(P: CurvedPolygon, F: Integrand, degree: Optional[int] = None):
    """
    Integral of F over P from a fan of possibly inverted Bezier triangles
    around the first vertex, using the signed Jacobian determinant.
    """
    function, degree = _as_function(F, degree)
    apex = P.segments[0].start
    total = 0.0
    for segment in P.segments:
        triangle = fan_triangle(apex, segment)
        q = triangle.degree
        rule = triangle_rule(2 * (q - 1) + degree * q)
        mapped = de_casteljau_triangle(triangle.control_net, rule.points[:, 0], rule.points[:, 1])
        det = jacobian_det(triangle, rule.points[:, 0], rule.points[:, 1])
        values = np.asarray(function(mapped[:, 0], mapped[:, 1]))
        weighted = _trailing(rule.weights * det, values.ndim - 1) * values
        total = total + weighted.sum(axis=0)
    return total


def polygonal_approximation(P: CurvedPolygon, pieces: int) -> CurvedPolygon:
    """ every segment replaced by pieces chords between equally spaced parameters """
    if pieces < 1:
        raise ValueError(f"number of chords must be positive, got {pieces}")
    parameters = np.linspace(0.0, 1.0, pieces + 1)
    chords: List[BezierCurve] = []
    for segment in P.segments:
        points = evaluate_multi(segment, parameters)
        points[0], points[-1] = segment.start, segment.end
        chords.extend(linear_curve(points[k], points[k + 1]) for k in range(pieces))
    return CurvedPolygon(chords)
