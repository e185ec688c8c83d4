import logging
from typing import List, NamedTuple, Optional, Tuple
try:
    from typing import Literal
except ImportError:
    from typing_extensions import Literal

import numpy as np

from ..errors import CoincidentCurvesError, CoincidentEdgesError, CornerAmbiguityError, TraversalStallError
from ..settings import SettingsManager
from ..utility import cross_2d
from .bezier_curve import BezierCurve, derivative_curve, eval_curve, second_derivative_curve, specialize_curve
from .bezier_triangle import BezierTriangle, contains_point
from .curve_intersection import intersect_curves
from .curved_polygon import CurvedPolygon, SegmentSource

logger = logging.getLogger(__name__)

TRANSVERSAL = "transversal"
TANGENT = "tangent"
CORNER = "corner"

FIRST = "first"
SECOND = "second"
NEITHER = "neither"

EventKind = Literal["transversal", "tangent", "corner"]
ArcStatus = Literal["first", "second", "neither"]


class EdgeIntersectionEvent(NamedTuple):
    edge_index_0: int
    edge_index_1: int
    s: float
    t: float
    point: np.ndarray
    transversality: float
    kind: EventKind


class _Overlap(NamedTuple):
    edge_index_0: int
    edge_index_1: int
    s_range: Tuple[float, float]
    t_range: Tuple[float, float]
    same_direction: bool


class _Arc(NamedTuple):
    owner: int
    edge_index: int
    start: float
    end: float
    curve: BezierCurve

    @property
    def key(self):
        return self.edge_index, self.start, self.owner


def _make_event(edges_0, edges_1, i: int, j: int, s: float, t: float, tangent: bool) -> EdgeIntersectionEvent:
    """ event with the parameters moved off s = 1 / t = 1 onto the start of the following edge """
    if s == 1.0:
        i, s = (i + 1) % 3, 0.0
    if t == 1.0:
        j, t = (j + 1) % 3, 0.0
    d0 = derivative_curve(edges_0[i], s)
    d1 = derivative_curve(edges_1[j], t)
    transversality = float(cross_2d(d0, d1))
    if s == 0.0 or t == 0.0:
        kind = CORNER
    elif tangent:
        kind = TANGENT
    else:
        kind = TRANSVERSAL
    return EdgeIntersectionEvent(i, j, s, t, eval_curve(edges_0[i], s), transversality, kind)


def _collect(T0: BezierTriangle, T1: BezierTriangle) -> Tuple[List[EdgeIntersectionEvent], List[_Overlap]]:
    edges_0, edges_1 = T0.edges(), T1.edges()
    events: List[EdgeIntersectionEvent] = []
    overlaps: List[_Overlap] = []
    for i, edge_0 in enumerate(edges_0):
        for j, edge_1 in enumerate(edges_1):
            try:
                found = intersect_curves(edge_0, edge_1)
            except CoincidentCurvesError as err:
                if err.overlap is None:
                    raise CoincidentEdgesError(i, j, str(err)) from err
                (s_a, s_b), (t_a, t_b) = err.overlap
                overlaps.append(_Overlap(i, j, (s_a, s_b), (t_a, t_b), bool(err.same_direction)))
                events.append(_make_event(edges_0, edges_1, i, j, s_a, t_a, tangent=True))
                events.append(_make_event(edges_0, edges_1, i, j, s_b, t_b, tangent=True))
                continue
            events.extend(_make_event(edges_0, edges_1, i, j, hit.s, hit.t, hit.tangent) for hit in found)

    tolerance = SettingsManager.get("curve_intersection", "duplicate_tolerance")
    unique: List[EdgeIntersectionEvent] = []
    for event in sorted(events, key=lambda e: (e.edge_index_0, e.s, e.edge_index_1, e.t)):
        if any(event.edge_index_0 == kept.edge_index_0 and event.edge_index_1 == kept.edge_index_1 and
               abs(event.s - kept.s) <= tolerance and abs(event.t - kept.t) <= tolerance for kept in unique):
            continue
        unique.append(event)
    return unique, overlaps


def all_edge_intersections(T0: BezierTriangle, T1: BezierTriangle) -> List[EdgeIntersectionEvent]:
    """
    Intersections of the nine edge pairs, sorted by (edge_index_0, s).

    Intersections at a triangle corner are reported once, on the edge that
    starts at that corner. Edges sharing a segment contribute the ends of
    the shared segment; edges coincident on a curved segment of unknown
    extent raise CoincidentEdgesError.
    """
    return _collect(T0, T1)[0]


def classify_event(e: EdgeIntersectionEvent, T0: Optional[BezierTriangle] = None,
                   T1: Optional[BezierTriangle] = None) -> ArcStatus:
    """
    Which curve leaves the event towards the interior of both triangles:
    FIRST (the edge of T0), SECOND (the edge of T1) or NEITHER for tangencies.

    Corner events use the one-sided tangents of the edges starting at the
    event. Parallel one-sided tangents are separated by curvature, which
    needs the triangles; a remaining tie raises CornerAmbiguityError.
    """
    if e.kind == TANGENT:
        return NEITHER
    if e.kind == TRANSVERSAL:
        return SECOND if e.transversality > 0.0 else FIRST

    if T0 is None or T1 is None:
        raise ValueError("classifying a corner event needs both triangles")
    edge_0 = T0.edges()[e.edge_index_0]
    edge_1 = T1.edges()[e.edge_index_1]
    d0, d1 = derivative_curve(edge_0, e.s), derivative_curve(edge_1, e.t)
    norms = np.linalg.norm(d0) * np.linalg.norm(d1)
    if abs(e.transversality) > SettingsManager.get("curve_intersection", "tangent_tolerance") * norms:
        return SECOND if e.transversality > 0.0 else FIRST
    if float(d0 @ d1) < 0.0:
        return NEITHER

    bend = cross_2d(d0, second_derivative_curve(edge_1, e.t) / float(d1 @ d1) -
                    second_derivative_curve(edge_0, e.s) / float(d0 @ d0))
    if bend > 0.0:
        return SECOND
    if bend < 0.0:
        return FIRST
    raise CornerAmbiguityError(f"edges {e.edge_index_0} and {e.edge_index_1} leave the corner at "
                               f"{tuple(e.point)} with the same tangent and curvature")


def _parameter_tolerance() -> float:
    return SettingsManager.get("triangle_intersection", "parameter_tolerance")


def _split_parameters(values: List[float]) -> List[float]:
    tolerance = _parameter_tolerance()
    parameters = sorted(set([0.0, 1.0] + [v for v in values if 0.0 <= v <= 1.0]))
    merged = [parameters[0]]
    for value in parameters[1:]:
        if value - merged[-1] > tolerance:
            merged.append(value)
        elif value == 1.0:
            merged[-1] = 1.0
    return merged


def _own(owner: int, event: EdgeIntersectionEvent) -> Tuple[int, float]:
    return (event.edge_index_0, event.s) if owner == 0 else (event.edge_index_1, event.t)


def _other(owner: int, event: EdgeIntersectionEvent) -> Tuple[int, float]:
    return (event.edge_index_1, event.t) if owner == 0 else (event.edge_index_0, event.s)


def _runs_inside(T0: BezierTriangle, T1: BezierTriangle, owner: int, own_edge: int, own_parameter: float,
                other_edge: int, other_parameter: float) -> Optional[bool]:
    """
    Whether the owner's edge, leaving own_parameter forwards, runs on the
    interior side of the other triangle's edge at other_parameter. None when
    the two curves leave together with equal curvature.
    """
    if owner == 0:
        i, j, s, t = own_edge, other_edge, own_parameter, other_parameter
    else:
        i, j, s, t = other_edge, own_edge, other_parameter, own_parameter
    edge_0, edge_1 = T0.edges()[i], T1.edges()[j]
    point = eval_curve(edge_0, s)
    transversality = float(cross_2d(derivative_curve(edge_0, s), derivative_curve(edge_1, t)))
    side_event = EdgeIntersectionEvent(i, j, s, t, point, transversality, CORNER)
    try:
        status = classify_event(side_event, T0, T1)
    except CornerAmbiguityError:
        return None
    return status == (FIRST if owner == 0 else SECOND)


def _leaves_inside(owner: int, event: EdgeIntersectionEvent, T0: BezierTriangle, T1: BezierTriangle) -> Optional[bool]:
    """
    Whether the owner's boundary, leaving the event forwards, enters the other
    triangle. None for tangencies, which do not change the side.
    """
    if event.kind != CORNER:
        status = classify_event(event)
        return None if status == NEITHER else status == (FIRST if owner == 0 else SECOND)

    own_edge, own_parameter = _own(owner, event)
    other_edge, other_parameter = _other(owner, event)
    if other_parameter != 0.0:
        # the other boundary is smooth here, so one side test decides
        return classify_event(event, T0, T1) == (FIRST if owner == 0 else SECOND)

    # a corner of the other triangle: its interior is the wedge between the
    # edge leaving the corner and the edge arriving at it
    leaving = _runs_inside(T0, T1, owner, own_edge, own_parameter, other_edge, 0.0)
    arriving = _runs_inside(T0, T1, owner, own_edge, own_parameter, (other_edge - 1) % 3, 1.0)
    if leaving is None and arriving is None:
        raise CornerAmbiguityError(f"edge {own_edge} of triangle {owner} leaves the corner at {tuple(event.point)} "
                                   f"along both edges of the other triangle")
    return (leaving is not False) and (arriving is not False)


def _overlap_status(owner: int, edge_index: int, start: float, end: float, overlaps: List[_Overlap]) -> Optional[bool]:
    tolerance = _parameter_tolerance()
    for overlap in overlaps:
        if (overlap.edge_index_0 if owner == 0 else overlap.edge_index_1) != edge_index:
            continue
        low, high = sorted(overlap.s_range if owner == 0 else overlap.t_range)
        if low - tolerance <= start and end <= high + tolerance:
            return overlap.same_direction and owner == 0
    return None


def _boundary_walk(owner: int, T0: BezierTriangle, T1: BezierTriangle, events: List[EdgeIntersectionEvent],
                   overlaps: List[_Overlap]) -> List[_Arc]:
    """
    Cut the owner's boundary at every event and walk it once around. The side
    of the other triangle only changes at events, so each piece takes the side
    decided at the last event before it. Pieces on a shared segment are kept
    from T0 when both boundaries run the same way.
    """
    triangle, other = (T0, T1) if owner == 0 else (T1, T0)
    tolerance = _parameter_tolerance()
    pieces = []
    for edge_index, edge in enumerate(triangle.edges()):
        values = [_own(owner, event)[1] for event in events if _own(owner, event)[0] == edge_index]
        for overlap in overlaps:
            if (overlap.edge_index_0 if owner == 0 else overlap.edge_index_1) == edge_index:
                values.extend(overlap.s_range if owner == 0 else overlap.t_range)
        parameters = _split_parameters(values)
        for start, end in zip(parameters[:-1], parameters[1:]):
            shared = _overlap_status(owner, edge_index, start, end, overlaps)
            decided = None
            for event in (events if shared is None else ()):
                own_edge, own_parameter = _own(owner, event)
                if own_edge == edge_index and abs(own_parameter - start) <= tolerance:
                    decided = _leaves_inside(owner, event, T0, T1)
                    if decided is not None:
                        break
            pieces.append((_Arc(owner, edge_index, start, end, specialize_curve(edge, start, end)), shared, decided))

    decided_at = [index for index, (_, shared, decided) in enumerate(pieces) if shared is None and decided is not None]
    if decided_at:
        inside = pieces[decided_at[-1]][2]
    else:
        first_free = next((arc for arc, shared, _ in pieces if shared is None), None)
        if first_free is None:
            inside = False
        else:
            # nothing but tangencies: the whole free boundary lies on one side
            inside = contains_point(other, eval_curve(first_free.curve, 0.5))
            logger.debug(f"no deciding event on triangle {owner}, containment test gives inside={inside}")

    kept = []
    for arc, shared, decided in pieces:
        if shared is not None:
            if shared:
                kept.append(arc)
            continue
        if decided is not None:
            inside = decided
        if inside:
            kept.append(arc)
    return kept


def _arcs(T0: BezierTriangle, T1: BezierTriangle, events, overlaps) -> List[_Arc]:
    return _boundary_walk(0, T0, T1, events, overlaps) + _boundary_walk(1, T0, T1, events, overlaps)


def _merge_contiguous(loop: List[_Arc], edges) -> List[_Arc]:
    """ join consecutive arcs of the same edge (split at tangencies), including across the loop closure """
    tolerance = _parameter_tolerance()
    merged: List[_Arc] = []
    for arc in loop:
        if merged and merged[-1].owner == arc.owner and merged[-1].edge_index == arc.edge_index \
                and abs(merged[-1].end - arc.start) <= tolerance:
            previous = merged.pop()
            arc = _Arc(arc.owner, arc.edge_index, previous.start, arc.end,
                       specialize_curve(edges[arc.owner][arc.edge_index], previous.start, arc.end))
        merged.append(arc)
    if len(merged) > 2:
        first, last = merged[0], merged[-1]
        if first.owner == last.owner and first.edge_index == last.edge_index and \
                abs(last.end - first.start) <= tolerance:
            edge = edges[first.owner][first.edge_index]
            merged = [_Arc(first.owner, first.edge_index, last.start, first.end,
                           specialize_curve(edge, last.start, first.end))] + merged[1:-1]
    return merged


def _chain(arcs: List[_Arc], scale: float) -> List[List[_Arc]]:
    tolerance = SettingsManager.get("triangle_intersection", "chain_tolerance") * scale
    remaining = sorted(arcs, key=lambda arc: arc.key)
    loops = []
    while remaining:
        loop = [remaining.pop(0)]
        for _ in range(len(arcs) + 1):
            end = loop[-1].curve.end
            if np.linalg.norm(end - loop[0].curve.start) <= tolerance and len(loop) > 1:
                break
            distances = [float(np.linalg.norm(arc.curve.start - end)) for arc in remaining]
            if not distances or min(distances) > tolerance:
                if np.linalg.norm(end - loop[0].curve.start) <= tolerance:
                    break
                raise TraversalStallError(f"boundary traversal stalled at {tuple(end)} after {len(loop)} segments")
            loop.append(remaining.pop(int(np.argmin(distances))))
        else:
            raise TraversalStallError(f"boundary traversal did not close after {len(arcs)} segments")
        loops.append(loop)
    return loops


def _stitched(loop: List[_Arc]) -> List[BezierCurve]:
    """ make consecutive segments share their junction point exactly """
    points = [np.array(arc.curve.control_points) for arc in loop]
    for index in range(len(points)):
        following = (index + 1) % len(points)
        junction = 0.5 * (points[index][-1] + points[following][0])
        points[index][-1] = junction
        points[following][0] = junction
    return [BezierCurve(p) for p in points]


def intersect_triangles(T0: BezierTriangle, T1: BezierTriangle) -> List[CurvedPolygon]:
    """
    T0 intersected with T1 as a list of disjoint curved polygons.

    Every edge is cut at the intersection events, each piece is kept when it
    runs inside the other triangle and the kept pieces are chained into
    closed loops. A segment shared by both boundaries with the same
    orientation appears once, taken from T0. Each loop starts at the piece
    with the smallest (edge index, start parameter, owner).
    """
    if not T0.bounding_box().overlaps(T1.bounding_box()):
        return []
    scale = max(T0.diameter, T1.diameter)
    events, overlaps = _collect(T0, T1)
    logger.debug(f"triangle intersection found {len(events)} edge events and {len(overlaps)} shared segments")

    if not events and not overlaps:
        if contains_point(T1, T0.corners[0]):
            return [_triangle_polygon(T0, 0)]
        if contains_point(T0, T1.corners[0]):
            return [_triangle_polygon(T1, 1)]
        return []

    edges = (T0.edges(), T1.edges())
    arcs = _arcs(T0, T1, events, overlaps)
    polygons = []
    area_tolerance = SettingsManager.get("triangle_intersection", "area_tolerance") * scale ** 2
    for loop in _chain(arcs, scale):
        loop = _merge_contiguous(loop, edges)
        first = min(range(len(loop)), key=lambda index: loop[index].key)
        loop = loop[first:] + loop[:first]
        if len(loop) < 2:
            logger.warning(f"discarded a closed boundary piece with a single segment at {tuple(loop[0].curve.start)}")
            continue
        sources = [SegmentSource(arc.owner, arc.edge_index, arc.start, arc.end) for arc in loop]
        polygon = CurvedPolygon(_stitched(loop), sources, validate=False)
        if polygon.area <= area_tolerance:
            logger.warning(f"discarded intersection loop with area {polygon.area:.3g}")
            continue
        polygons.append(CurvedPolygon(polygon.segments, sources))
    return polygons


def _triangle_polygon(T: BezierTriangle, owner: int) -> CurvedPolygon:
    sources = [SegmentSource(owner, index, 0.0, 1.0) for index in range(3)]
    return CurvedPolygon(T.edges(), sources)
