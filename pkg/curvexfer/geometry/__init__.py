from .bezier_curve import (BezierCurve, BoundingBox, bernstein_basis, bounding_box, derivative_curve, elevate,
                           elevate_to, eval_curve, evaluate_multi, is_linear, linear_curve, max_degree,
                           second_derivative_curve, specialize_curve, subdivide_curve)
from .bezier_triangle import (BezierTriangle, StandardNodes, bernstein_basis_triangle, contains_point, edges,
                              eval_triangle, is_valid, jacobian_det, locate_point, net_to_nodes, nodes_to_net,
                              specialize_triangle, subdivide_triangle)
from .bezier_triangle import area as triangle_area
from .curve_intersection import CurveIntersection, NewtonResult, boxes_overlap, intersect_curves, newton_refine
from .curved_polygon import area as polygon_area
from .curved_polygon import (CurvedPolygon, SegmentSource, eval_antiderivative_h, eval_antiderivative_v, integrate,
                             polygonal_approximation, tessellation_crosscheck)
from .polynomial import BivariatePolynomial
from .quadrature import gauss_legendre, triangle_rule
from .triangle_intersection import EdgeIntersectionEvent, all_edge_intersections, classify_event, intersect_triangles
