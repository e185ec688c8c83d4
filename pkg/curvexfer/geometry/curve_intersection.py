import logging
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..errors import CoincidentCurvesError
from ..settings import SettingsManager
from ..utility import cross_2d
from .bezier_curve import (BezierCurve, BoundingBox, derivative_curve, elevate_to, eval_curve, evaluate_multi, flatness,
                           linear_curve, second_derivative_curve, specialize_curve, subdivide_curve)

logger = logging.getLogger(__name__)


class CurveIntersection(NamedTuple):
    s: float
    t: float
    point: np.ndarray
    transversality: float
    tangent: bool


class NewtonResult(NamedTuple):
    s: float
    t: float
    iterations: int
    residual: float
    converged: bool


def boxes_overlap(a: BoundingBox, b: BoundingBox) -> bool:
    """ closed boxes, so touching edges or corners count as overlap """
    return a.overlaps(b)


def _setting(key: str):
    return SettingsManager.get("curve_intersection", key)


def newton_refine(c0: BezierCurve, c1: BezierCurve, s0: float, t0: float,
                  max_iterations: Optional[int] = None, tolerance: Optional[float] = None) -> NewtonResult:
    """
    Newton's method for F(s, t) = c0(s) - c1(t) = 0 with Jacobian [c0'(s), -c1'(t)].

    A (nearly) singular Jacobian falls back to the least-squares step, which
    is how tangent roots are approached; those converge only linearly.
    """
    max_iterations = _setting("newton_max_iterations") if max_iterations is None else max_iterations
    tolerance = _setting("newton_tolerance") if tolerance is None else tolerance

    s, t = float(s0), float(t0)
    iterations = 0
    converged = False
    for _ in range(max_iterations):
        residual = eval_curve(c0, s) - eval_curve(c1, t)
        tangent_0 = derivative_curve(c0, s)
        tangent_1 = derivative_curve(c1, t)
        jacobian = np.column_stack([tangent_0, -tangent_1])
        det = tangent_0[0] * -tangent_1[1] + tangent_1[0] * tangent_0[1]
        if abs(det) > 1e-14 * np.linalg.norm(tangent_0) * np.linalg.norm(tangent_1):
            delta = np.linalg.solve(jacobian, residual)
        else:
            delta = np.linalg.lstsq(jacobian, residual, rcond=None)[0]
        if np.max(np.abs(delta)) < tolerance:
            converged = True
            break
        s, t = s - float(delta[0]), t - float(delta[1])
        iterations += 1
        if abs(s) > 2.0 or abs(t) > 2.0:
            break

    residual = float(np.linalg.norm(eval_curve(c0, s) - eval_curve(c1, t)))
    return NewtonResult(s, t, iterations, residual, converged)


def _refine_tangency(c0: BezierCurve, c1: BezierCurve, s: float, t: float, scale: float) -> Tuple[float, float]:
    """ Gauss-Newton on {c0(s) - c1(t) = 0, c0'(s) x c1'(t) = 0}, the cross term scaled to length units """
    normaliser = np.linalg.norm(derivative_curve(c0, s)) * np.linalg.norm(derivative_curve(c1, t))
    if normaliser == 0.0:
        return s, t
    weight = scale / normaliser
    tolerance = _setting("newton_tolerance")
    for _ in range(_setting("newton_max_iterations")):
        d0, d1 = derivative_curve(c0, s), derivative_curve(c1, t)
        dd0, dd1 = second_derivative_curve(c0, s), second_derivative_curve(c1, t)
        residual = np.append(eval_curve(c0, s) - eval_curve(c1, t), weight * cross_2d(d0, d1))
        jacobian = np.array([
            [d0[0], -d1[0]],
            [d0[1], -d1[1]],
            [weight * cross_2d(dd0, d1), weight * cross_2d(d0, dd1)],
        ])
        delta = np.linalg.lstsq(jacobian, residual, rcond=None)[0]
        s, t = s - float(delta[0]), t - float(delta[1])
        if np.max(np.abs(delta)) < tolerance:
            break
    return s, t


def _is_uniform_line(c: BezierCurve, tolerance: float) -> bool:
    """ straight with evenly spaced control points, so that the parameter is proportional to arc length """
    reference = linear_curve(c.start, c.end, c.degree).control_points
    length = np.linalg.norm(c.end - c.start)
    return length > 0.0 and np.max(np.abs(reference - c.control_points)) <= tolerance * length


def _check_coincident(c0: BezierCurve, c1: BezierCurve, scale: float) -> Optional[List[Tuple[float, float]]]:
    """
    Raises CoincidentCurvesError for whole-curve coincidence and for straight
    overlaps of positive length. Returns the (s, t) contact of two collinear
    segments meeting in a single point, an empty list for disjoint collinear
    segments and None when the general algorithm has to decide.
    """
    tolerance = _setting("coincidence_tolerance")
    if c0.degree == c1.degree:
        if np.max(np.abs(c0.control_points - c1.control_points)) <= tolerance * scale:
            raise CoincidentCurvesError("curves are identical", overlap=((0.0, 1.0), (0.0, 1.0)), same_direction=True)
        if np.max(np.abs(c0.control_points - c1.control_points[::-1])) <= tolerance * scale:
            raise CoincidentCurvesError("curves are identical with opposite orientation",
                                        overlap=((0.0, 1.0), (1.0, 0.0)), same_direction=False)

    if not (_is_uniform_line(c0, tolerance) and _is_uniform_line(c1, tolerance)):
        return None
    direction = c0.end - c0.start
    length_squared = float(direction @ direction)
    length = np.sqrt(length_squared)
    if (abs(cross_2d(direction, c1.start - c0.start)) > tolerance * scale * length or
            abs(cross_2d(direction, c1.end - c0.start)) > tolerance * scale * length):
        return None

    # c1 projected onto c0 is s(t) = alpha + beta * t
    alpha = float((c1.start - c0.start) @ direction) / length_squared
    beta = float((c1.end - c1.start) @ direction) / length_squared
    low, high = max(0.0, min(alpha, alpha + beta)), min(1.0, max(alpha, alpha + beta))
    endpoint_tolerance = _setting("endpoint_tolerance")
    if high - low > endpoint_tolerance:
        overlap = ((low, high), ((low - alpha) / beta, (high - alpha) / beta))
        raise CoincidentCurvesError("straight curves overlap on a segment", overlap=overlap, same_direction=beta > 0.0)
    if high - low < -endpoint_tolerance:
        return []
    s = 0.5 * (low + high)
    return [(s, (s - alpha) / beta)]


def _chord_seed(piece_0: BezierCurve, piece_1: BezierCurve) -> Optional[Tuple[float, float]]:
    """ intersection of the two chords in local parameters, or the midpoints when the chords are (nearly) parallel """
    d0 = piece_0.end - piece_0.start
    d1 = piece_1.end - piece_1.start
    denominator = cross_2d(d0, d1)
    scale = np.linalg.norm(d0) * np.linalg.norm(d1)
    if abs(denominator) <= 1e-8 * scale:
        return 0.5, 0.5
    offset = piece_1.start - piece_0.start
    sigma = cross_2d(offset, d1) / denominator
    tau = cross_2d(offset, d0) / denominator
    wiggle = 1e-6
    if -wiggle <= sigma <= 1.0 + wiggle and -wiggle <= tau <= 1.0 + wiggle:
        return float(sigma), float(tau)
    return None


def _hulls_separated(piece_0: BezierCurve, piece_1: BezierCurve, slack: float) -> bool:
    """ True when the normal of either chord separates the two control polygons """
    for reference in (piece_0, piece_1):
        chord = reference.end - reference.start
        length = float(np.hypot(chord[0], chord[1]))
        if length == 0.0:
            continue
        normal = np.array([-chord[1], chord[0]]) / length
        offsets_0 = piece_0.control_points @ normal
        offsets_1 = piece_1.control_points @ normal
        if offsets_0.max() + slack < offsets_1.min() or offsets_1.max() + slack < offsets_0.min():
            return True
    return False


def _subdivision_seeds(c0: BezierCurve, c1: BezierCurve, scale: float) -> List[Tuple[float, float]]:
    """
    Chord intersections of all pairs of flat pieces whose control polygons
    still overlap. Both pieces of a pair are halved until both are flat, so a
    flat piece keeps shrinking against a curved one.
    """
    flatness_tolerance = _setting("flatness_tolerance")
    budget = _setting("candidate_budget")
    max_depth = _setting("max_depth")
    slack = _setting("intersection_tolerance") * scale

    seeds = []
    candidates = [((c0, 0.0, 1.0), (c1, 0.0, 1.0))]
    for depth in range(max_depth + 1):
        if not candidates:
            break
        next_candidates = []
        for (piece_0, a0, b0), (piece_1, a1, b1) in candidates:
            if not boxes_overlap(piece_0.bounding_box().inflated(slack), piece_1.bounding_box()):
                continue
            if _hulls_separated(piece_0, piece_1, slack):
                continue
            linear_0 = flatness(piece_0) <= flatness_tolerance
            linear_1 = flatness(piece_1) <= flatness_tolerance
            if (linear_0 and linear_1) or depth == max_depth:
                seed = _chord_seed(piece_0, piece_1)
                if seed is not None:
                    seeds.append((a0 + seed[0] * (b0 - a0), a1 + seed[1] * (b1 - a1)))
                continue
            next_candidates.extend((h0, h1) for h0 in _halves(piece_0, a0, b0) for h1 in _halves(piece_1, a1, b1))
        if len(next_candidates) > budget:
            _raise_if_overlapping(c0, c1, scale)
            logger.warning(f"curve subdivision kept {len(next_candidates)} candidate pairs at depth {depth + 1} "
                           f"without a shared segment, seeding Newton from every pair")
            seeds.extend(_pair_midpoints(next_candidates))
            break
        candidates = next_candidates
    logger.debug(f"curve subdivision produced {len(seeds)} Newton seeds")
    return seeds


def _pair_midpoints(candidates) -> List[Tuple[float, float]]:
    """ one seed per distinct pair of parameter cells """
    cells = {(round(0.5 * (a0 + b0), 12), round(0.5 * (a1 + b1), 12))
             for (_, a0, b0), (_, a1, b1) in candidates}
    return sorted(cells)


def _project(c: BezierCurve, point: np.ndarray) -> Tuple[float, float]:
    """ parameter in [0, 1] of the point of c closest to the given point, and the distance """
    samples = np.linspace(0.0, 1.0, 4 * c.degree + 5)
    s = float(samples[np.argmin(np.linalg.norm(evaluate_multi(c, samples) - point, axis=1))])
    for _ in range(_setting("newton_max_iterations")):
        offset = eval_curve(c, s) - point
        tangent = derivative_curve(c, s)
        slope = float(tangent @ tangent + offset @ second_derivative_curve(c, s))
        if slope <= 0.0:
            break
        step = float(offset @ tangent) / slope
        s = min(1.0, max(0.0, s - step))
        if abs(step) < _setting("newton_tolerance"):
            break
    return s, float(np.linalg.norm(eval_curve(c, s) - point))


def _raise_if_overlapping(c0: BezierCurve, c1: BezierCurve, scale: float):
    """
    Raises CoincidentCurvesError when c0 and c1 share a segment of positive
    length. The ends of a shared segment are end points of c0 or c1, so the
    candidate overlap is cut out of both curves and compared control point by
    control point.
    """
    tolerance = _setting("intersection_tolerance") * scale
    endpoint_tolerance = _setting("endpoint_tolerance")
    s_values, t_values = [], []
    for t_end, point in ((0.0, c1.start), (1.0, c1.end)):
        s, distance = _project(c0, point)
        if distance <= tolerance:
            s_values.append(s)
            t_values.append(t_end)
    for s_end, point in ((0.0, c0.start), (1.0, c0.end)):
        t, distance = _project(c1, point)
        if distance <= tolerance:
            s_values.append(s_end)
            t_values.append(t)
    if len(s_values) < 2:
        return
    order = np.argsort(s_values)
    s_low, s_high = s_values[order[0]], s_values[order[-1]]
    t_low, t_high = t_values[order[0]], t_values[order[-1]]
    if s_high - s_low <= endpoint_tolerance or abs(t_high - t_low) <= endpoint_tolerance:
        return
    piece_0 = specialize_curve(c0, s_low, s_high)
    piece_1 = specialize_curve(c1, min(t_low, t_high), max(t_low, t_high))
    if t_high < t_low:
        piece_1 = piece_1.reversed()
    degree = max(piece_0.degree, piece_1.degree)
    piece_0, piece_1 = elevate_to(piece_0, degree), elevate_to(piece_1, degree)
    try:
        _check_coincident(piece_0, piece_1, scale)
    except CoincidentCurvesError as error:
        if error.overlap is None or not error.same_direction:
            raise
        raise CoincidentCurvesError("curves share a segment", overlap=((s_low, s_high), (t_low, t_high)),
                                    same_direction=t_high > t_low) from error


def _halves(piece: BezierCurve, a: float, b: float):
    left, right = subdivide_curve(piece)
    middle = 0.5 * (a + b)
    return [(left, a, middle), (right, middle, b)]


def _snap(value: float, tolerance: float) -> Optional[float]:
    if -tolerance <= value <= tolerance:
        return 0.0
    if 1.0 - tolerance <= value <= 1.0 + tolerance:
        return 1.0
    if 0.0 < value < 1.0:
        return value
    return None


def intersect_curves(c0: BezierCurve, c1: BezierCurve) -> List[CurveIntersection]:
    """
    All points where c0 and c1 meet for parameters in [0, 1] x [0, 1], sorted by s.

    Raises CoincidentCurvesError when the curves share a segment. The error
    carries the overlap parameters when they are known (identical curves and
    straight overlaps).
    """
    scale = max(c0.bounding_box().diameter, c1.bounding_box().diameter)
    if scale == 0.0:
        raise ValueError("cannot intersect curves of zero extent")
    if not boxes_overlap(c0.bounding_box(), c1.bounding_box()):
        return []

    collinear_contact = _check_coincident(c0, c1, scale)
    if collinear_contact is not None:
        seeds = collinear_contact
    else:
        seeds = [(float(s), float(t)) for s in (0.0, 1.0) for t in (0.0, 1.0)
                 if np.linalg.norm((c0.start if s == 0.0 else c0.end) - (c1.start if t == 0.0 else c1.end))
                 <= _setting("intersection_tolerance") * scale]
        seeds += _subdivision_seeds(c0, c1, scale)

    endpoint_tolerance = _setting("endpoint_tolerance")
    intersection_tolerance = _setting("intersection_tolerance") * scale
    tangent_tolerance = _setting("tangent_tolerance")

    found = []
    for seed_s, seed_t in seeds:
        result = newton_refine(c0, c1, seed_s, seed_t)
        s, t = result.s, result.t
        tangent_0, tangent_1 = derivative_curve(c0, s), derivative_curve(c1, t)
        norms = np.linalg.norm(tangent_0) * np.linalg.norm(tangent_1)
        residual = result.residual
        if not result.converged or abs(cross_2d(tangent_0, tangent_1)) <= 1e-6 * norms:
            refined_s, refined_t = _refine_tangency(c0, c1, s, t, scale)
            refined_residual = float(np.linalg.norm(eval_curve(c0, refined_s) - eval_curve(c1, refined_t)))
            if refined_residual <= max(residual, intersection_tolerance):
                s, t, residual = refined_s, refined_t, refined_residual
        if residual > intersection_tolerance:
            if not result.converged and -0.5 <= result.s <= 1.5 and -0.5 <= result.t <= 1.5:
                logger.warning(f"curve intersection candidate dropped, Newton did not converge from seed "
                               f"({seed_s:.6g}, {seed_t:.6g}), last iterate ({result.s:.6g}, {result.t:.6g}), "
                               f"residual {result.residual:.3g}")
            continue
        snapped_s, snapped_t = _snap(s, endpoint_tolerance), _snap(t, endpoint_tolerance)
        if snapped_s is None or snapped_t is None:
            continue
        found.append((snapped_s, snapped_t, residual))

    found.sort()
    duplicate_tolerance = _setting("duplicate_tolerance")
    unique: List[Tuple[float, float, float]] = []
    for s, t, residual in found:
        match = next((index for index, (s_u, t_u, _) in enumerate(unique)
                      if abs(s - s_u) <= duplicate_tolerance and abs(t - t_u) <= duplicate_tolerance), None)
        if match is None:
            unique.append((s, t, residual))
        elif _endpoint_rank(s, t) > _endpoint_rank(*unique[match][:2]) or \
                (_endpoint_rank(s, t) == _endpoint_rank(*unique[match][:2]) and residual < unique[match][2]):
            unique[match] = (s, t, residual)

    intersections = []
    for s, t, _ in sorted(unique):
        tangent_0, tangent_1 = derivative_curve(c0, s), derivative_curve(c1, t)
        transversality = float(cross_2d(tangent_0, tangent_1))
        tangent = abs(transversality) <= tangent_tolerance * np.linalg.norm(tangent_0) * np.linalg.norm(tangent_1)
        intersections.append(CurveIntersection(s, t, eval_curve(c0, s), transversality, bool(tangent)))
    return intersections


def _endpoint_rank(s: float, t: float) -> int:
    """ how many of the parameters sit exactly on an interval end, snapped values win when merging """
    return int(s in (0.0, 1.0)) + int(t in (0.0, 1.0))
