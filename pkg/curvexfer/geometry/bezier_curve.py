from __future__ import annotations
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb

from ..errors import DegreeError, InvalidIntervalError
from ..settings import SettingsManager
from ..utility import as_points, cross_2d
from .kernels import de_casteljau_points


def max_degree() -> int:
    """ degree cap shared by curves, triangles and mesh files (setting mesh.max_degree) """
    return SettingsManager.get("mesh", "max_degree")


class BoundingBox(NamedTuple):
    """ closed axis-aligned box [x_min, x_max] x [y_min, y_max] """
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    @classmethod
    def of_points(cls, points: np.ndarray) -> "BoundingBox":
        minimum = points.min(axis=0)
        maximum = points.max(axis=0)
        return cls(float(minimum[0]), float(maximum[0]), float(minimum[1]), float(maximum[1]))

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.x_max - self.x_min, self.y_max - self.y_min))

    def inflated(self, amount: float) -> "BoundingBox":
        return BoundingBox(self.x_min - amount, self.x_max + amount, self.y_min - amount, self.y_max + amount)

    def contains(self, point) -> bool:
        return self.x_min <= point[0] <= self.x_max and self.y_min <= point[1] <= self.y_max

    def overlaps(self, other: "BoundingBox") -> bool:
        return (self.x_min <= other.x_max and other.x_min <= self.x_max and
                self.y_min <= other.y_max and other.y_min <= self.y_max)


def bernstein_basis(degree: int, s: Union[float, np.ndarray]) -> np.ndarray:
    """ values B_{j,n}(s) for j = 0..n, stacked along the last axis """
    s = np.asarray(s, dtype=np.float64)
    j = np.arange(degree + 1)
    return comb(degree, j) * (1.0 - s[..., None]) ** (degree - j) * s[..., None] ** j


def de_casteljau(control_points: np.ndarray, s: np.ndarray) -> np.ndarray:
    """ evaluate the curve with the given control points (n+1, d) at every parameter in s -> s.shape + (d,) """
    s = np.asarray(s, dtype=np.float64)
    control_points = np.ascontiguousarray(control_points, dtype=np.float64)
    points = de_casteljau_points(control_points, np.ascontiguousarray(s.ravel()))
    return points.reshape(s.shape + control_points.shape[1:])


def blossom(control_points: np.ndarray, parameters: Sequence[float]) -> np.ndarray:
    """ de Casteljau with a different parameter at each level; len(parameters) must equal the degree """
    work = control_points
    for u in parameters:
        work = (1.0 - u) * work[:-1] + u * work[1:]
    return work[0]


class BezierCurve:
    """
    Planar Bezier curve b(s) = sum_j B_{j,n}(s) p_j on the unit interval.

    Instances are immutable: the control points are stored in a read-only
    (n+1, 2) array. Degree is limited to max_degree() because the
    conditioning of the Bernstein representation degrades quickly with n.
    """

    __slots__ = ("_control_points", "_box")

    def __init__(self, control_points):
        control_points = as_points(control_points, name="control points")
        degree = control_points.shape[0] - 1
        limit = max_degree()
        if degree < 0 or degree > limit:
            raise DegreeError(degree, limit, kind="curve")
        self._control_points = control_points
        self._box = None

    @property
    def control_points(self) -> np.ndarray:
        return self._control_points

    @property
    def degree(self) -> int:
        return self._control_points.shape[0] - 1

    @property
    def start(self) -> np.ndarray:
        return self._control_points[0]

    @property
    def end(self) -> np.ndarray:
        return self._control_points[-1]

    def __repr__(self) -> str:
        return f"BezierCurve(degree={self.degree}, control_points={self._control_points.tolist()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BezierCurve):
            return NotImplemented
        return np.array_equal(self._control_points, other._control_points)

    def __hash__(self) -> int:
        return hash(self._control_points.tobytes())

    def evaluate(self, s: float) -> np.ndarray:
        return eval_curve(self, s)

    def evaluate_multi(self, s_values) -> np.ndarray:
        return evaluate_multi(self, s_values)

    def hodograph(self) -> "BezierCurve":
        """ derivative curve of degree n-1 (a single zero point for constant curves) """
        if self.degree == 0:
            return BezierCurve(np.zeros((1, 2)))
        return BezierCurve(self.degree * np.diff(self._control_points, axis=0))

    def bounding_box(self) -> BoundingBox:
        if self._box is None:
            self._box = BoundingBox.of_points(self._control_points)
        return self._box

    def reversed(self) -> "BezierCurve":
        return BezierCurve(self._control_points[::-1])


def eval_curve(c: BezierCurve, s: float) -> np.ndarray:
    """ point on the curve, computed with the de Casteljau recurrence """
    if s == 0.0:
        return c.control_points[0].copy()
    if s == 1.0:
        return c.control_points[-1].copy()
    return de_casteljau(c.control_points, np.float64(s))


def evaluate_multi(c: BezierCurve, s_values) -> np.ndarray:
    return de_casteljau(c.control_points, np.asarray(s_values, dtype=np.float64))


def derivative_curve(c: BezierCurve, s: float) -> np.ndarray:
    if c.degree == 0:
        return np.zeros(2)
    return de_casteljau(c.degree * np.diff(c.control_points, axis=0), np.float64(s))


def second_derivative_curve(c: BezierCurve, s: float) -> np.ndarray:
    if c.degree < 2:
        return np.zeros(2)
    n = c.degree
    return de_casteljau(n * (n - 1) * np.diff(c.control_points, n=2, axis=0), np.float64(s))


def subdivide_curve(c: BezierCurve) -> Tuple[BezierCurve, BezierCurve]:
    """ split at s = 1/2, the left half covers [0, 1/2] and the right half [1/2, 1] """
    work = np.array(c.control_points)
    left = [work[0]]
    right = [work[-1]]
    for _ in range(c.degree):
        work = 0.5 * (work[:-1] + work[1:])
        left.append(work[0])
        right.append(work[-1])
    return BezierCurve(np.array(left)), BezierCurve(np.array(right[::-1]))


def specialize_curve(c: BezierCurve, a: float, b: float) -> BezierCurve:
    """ curve d with d(r) = c(a + r (b - a)); control point k is the blossom c[a, ..., a, b, ..., b] with k copies of b """
    if not a < b:
        raise InvalidIntervalError(a, b)
    if a == 0.0 and b == 1.0:
        return c
    n = c.degree
    points = np.array([blossom(c.control_points, [a] * (n - k) + [b] * k) for k in range(n + 1)])
    return BezierCurve(points)


def bounding_box(c: BezierCurve) -> BoundingBox:
    return c.bounding_box()


def elevate(c: BezierCurve) -> BezierCurve:
    """ same curve represented with one more control point """
    n = c.degree
    p = c.control_points
    if n == 0:
        return BezierCurve(np.vstack([p, p]))
    weights = np.arange(1, n + 1)[:, None] / (n + 1)
    interior = weights * p[:-1] + (1.0 - weights) * p[1:]
    return BezierCurve(np.vstack([p[:1], interior, p[-1:]]))


def elevate_to(c: BezierCurve, degree: int) -> BezierCurve:
    if degree < c.degree:
        raise DegreeError(degree, c.degree, kind="target")
    while c.degree < degree:
        c = elevate(c)
    return c


def linear_curve(start, end, degree: int = 1) -> BezierCurve:
    """ straight segment from start to end with evenly spaced control points """
    weights = np.linspace(0.0, 1.0, degree + 1)[:, None]
    return BezierCurve((1.0 - weights) * np.asarray(start, dtype=np.float64) + weights * np.asarray(end, dtype=np.float64))


def flatness(c: BezierCurve) -> float:
    """ largest distance of an interior control point from the chord, relative to the chord length """
    points = c.control_points
    if c.degree < 2:
        return 0.0
    chord = points[-1] - points[0]
    length = float(np.hypot(chord[0], chord[1]))
    if length == 0.0:
        spread = np.max(np.hypot(*(points - points[0]).T))
        return 0.0 if spread == 0.0 else np.inf
    distances = np.abs(cross_2d(chord, points[1:-1] - points[0])) / length
    return float(distances.max() / length)


def is_linear(c: BezierCurve, tolerance: float) -> bool:
    return flatness(c) <= tolerance
