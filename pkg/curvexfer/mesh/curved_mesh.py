import logging
from typing import Iterator, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from ..errors import InvalidElementError
from ..geometry.bezier_curve import BoundingBox, eval_curve
from ..geometry.bezier_triangle import BezierTriangle, is_valid, subdivide_triangle
from ..geometry.quadrature import triangle_rule
from ..settings import SettingsManager
from .shape_basis import ShapeBasis

logger = logging.getLogger(__name__)

# edge i of an element runs from corner EDGE_CORNERS[i][0] to corner EDGE_CORNERS[i][1]
EDGE_CORNERS = ((0, 1), (1, 2), (2, 0))


class ElementQuadrature(NamedTuple):
    """ physical quadrature points (m, 2) and weights w * det(Db), so sum(weights * f(points)) integrates f """
    points: np.ndarray
    weights: np.ndarray


def element_quadrature(element: BezierTriangle, polynomial_degree: int, excess: int = 0) -> ElementQuadrature:
    """
    Quadrature over the element image for integrands that are polynomials of
    the given degree in physical coordinates, exact up to roundoff. A
    positive excess raises the rule degree for non-polynomial integrands.
    """
    p = element.degree
    if element.is_affine():
        degree = polynomial_degree
    else:
        degree = polynomial_degree * p + 2 * (p - 1)
    rule = triangle_rule(degree + excess)
    points = element.evaluate_multi(rule.points)
    det = element.jacobian_det(rule.points[:, 0], rule.points[:, 1])
    return ElementQuadrature(points, rule.weights * det)


class CurvedMesh:
    """
    Triangular mesh of Bezier triangles of one common degree.

    Adjacency is rebuilt from geometry: corners closer than the adjacency
    tolerance (relative to the mesh extent) are merged, and two elements are
    neighbours across an edge when they share both end vertices and the edge
    midpoints agree.
    """

    def __init__(self, elements: Sequence[BezierTriangle], validate: bool = True):
        elements = list(elements)
        if not elements:
            raise ValueError("a mesh needs at least one element")
        degrees = {element.degree for element in elements}
        if len(degrees) != 1:
            raise ValueError(f"all elements of a mesh must share one degree, found degrees {sorted(degrees)}")
        self._elements = elements
        self._degree = degrees.pop()
        self._bases: List[Optional[ShapeBasis]] = [None] * len(elements)
        self._boxes = np.array([element.bounding_box() for element in elements])
        self._adjacency = self._build_adjacency()
        if validate:
            self.validate()

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def elements(self) -> List[BezierTriangle]:
        return self._elements

    @property
    def adjacency(self) -> np.ndarray:
        """ (n, 3) neighbour ids across edges 0, 1, 2, -1 on the boundary """
        return self._adjacency

    @property
    def boxes(self) -> np.ndarray:
        """ (n, 4) element bounding boxes as x_min, x_max, y_min, y_max """
        return self._boxes

    def __len__(self) -> int:
        return len(self._elements)

    def __getitem__(self, index: int) -> BezierTriangle:
        return self._elements[index]

    def __iter__(self) -> Iterator[BezierTriangle]:
        return iter(self._elements)

    def __repr__(self) -> str:
        return f"CurvedMesh(degree={self._degree}, elements={len(self._elements)})"

    def neighbours(self, index: int) -> List[int]:
        return [int(n) for n in self._adjacency[index] if n >= 0]

    def bounding_box(self) -> BoundingBox:
        return BoundingBox(self._boxes[:, 0].min(), self._boxes[:, 1].max(), self._boxes[:, 2].min(), self._boxes[:, 3].max())

    def _build_adjacency(self) -> np.ndarray:
        corners = np.vstack([element.corners for element in self._elements])
        tolerance = SettingsManager.get("mesh", "adjacency_tolerance") * max(self.bounding_box().diameter, 1e-300)

        # merge corners into vertices, pairs closer than the tolerance are joined transitively
        pairs = np.array(sorted(cKDTree(corners).query_pairs(tolerance)), dtype=int).reshape(-1, 2)
        graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(corners), len(corners)))
        _, vertex_ids = connected_components(graph, directed=False)
        vertex_ids = vertex_ids.reshape(-1, 3)

        adjacency = np.full((len(self._elements), 3), -1, dtype=int)
        open_edges = {}
        for element_id, element in enumerate(self._elements):
            for edge_index, (a, b) in enumerate(EDGE_CORNERS):
                key = tuple(sorted((vertex_ids[element_id, a], vertex_ids[element_id, b])))
                partner = open_edges.pop(key, None)
                if partner is None:
                    open_edges[key] = (element_id, edge_index)
                    continue
                other_id, other_edge = partner
                midpoint = eval_curve(element.edges()[edge_index], 0.5)
                other_midpoint = eval_curve(self._elements[other_id].edges()[other_edge], 0.5)
                if np.linalg.norm(midpoint - other_midpoint) > tolerance:
                    logger.debug(f"elements {element_id} and {other_id} share end vertices but not edge {edge_index}")
                    continue
                adjacency[element_id, edge_index] = other_id
                adjacency[other_id, other_edge] = element_id
        return adjacency

    def validate(self):
        for element_id, element in enumerate(self._elements):
            if not is_valid(element):
                raise InvalidElementError(element_id)

    def basis(self, index: int) -> ShapeBasis:
        if self._bases[index] is None:
            self._bases[index] = ShapeBasis(self._elements[index], index)
        return self._bases[index]

    def element_area(self, index: int) -> float:
        quadrature = element_quadrature(self._elements[index], 0)
        return float(quadrature.weights.sum())

    def area(self) -> float:
        return float(sum(self.element_area(index) for index in range(len(self))))

    def mesh_size(self) -> float:
        """ largest control-net diameter over all elements """
        return float(max(pdist(element.control_net).max() for element in self._elements))

    def centroid(self, index: int) -> np.ndarray:
        return self._elements[index].evaluate(1.0 / 3.0, 1.0 / 3.0)


def refine(m: CurvedMesh) -> CurvedMesh:
    """ every element split into its four subdivision children """
    children = [child for element in m for child in subdivide_triangle(element)]
    logger.debug(f"refined mesh from {len(m)} to {len(children)} elements")
    return CurvedMesh(children)
