import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np

from ..geometry.bezier_triangle import BezierTriangle, lattice, multi_indices
from .curved_mesh import CurvedMesh

logger = logging.getLogger(__name__)

SQUARE_WIDTH = 17.0 / 8.0
DISC_ROTATION = 0.1
JITTER_FRACTION = 0.12


def _affine_nodes(degree: int, a, b, c) -> np.ndarray:
    parameters = lattice(degree)
    return a + parameters[:, :1] * (b - a) + parameters[:, 1:] * (c - a)


def _jitter(points: Dict, movable, spacing: float, seed: Optional[int]):
    if seed is None:
        return points
    rng = np.random.default_rng(seed)
    for key in sorted(movable):
        points[key] = points[key] + rng.uniform(-JITTER_FRACTION, JITTER_FRACTION, size=2) * spacing
    return points


def gen_square_mesh(p: int, n: int = 1, width: float = SQUARE_WIDTH, jitter_seed: Optional[int] = None) -> CurvedMesh:
    """
    Square of the given width centred at the origin, n x n cells each split
    along its rising diagonal into two straight-sided elements of degree p.
    """
    if n < 1:
        raise ValueError(f"number of subdivisions must be positive, got {n}")
    coordinates = np.linspace(-width / 2.0, width / 2.0, n + 1)
    vertices = {(i, j): np.array([coordinates[i], coordinates[j]]) for i in range(n + 1) for j in range(n + 1)}
    interior = [key for key in vertices if 0 < key[0] < n and 0 < key[1] < n]
    vertices = _jitter(vertices, interior, width / n, jitter_seed)

    elements = []
    for j in range(n):
        for i in range(n):
            a, b, c, d = vertices[i, j], vertices[i + 1, j], vertices[i + 1, j + 1], vertices[i, j + 1]
            elements.append(BezierTriangle(_affine_nodes(p, a, b, c)))
            elements.append(BezierTriangle(_affine_nodes(p, a, c, d)))
    logger.debug(f"generated square mesh with {len(elements)} elements of degree {p}")
    return CurvedMesh(elements)


def _disc_vertex(sector: int, i: int, j: int, n: int, rotation: float) -> Tuple[np.ndarray, float]:
    """ vertex (i, j) of a sector at ring level i + j, placed on the circle of radius level / n """
    level = i + j
    if level == 0:
        return np.zeros(2), 0.0
    angle = rotation + (sector + j / level) * math.pi / 3.0
    return level / n * np.array([math.cos(angle), math.sin(angle)]), angle


def gen_disc_mesh(p: int, n: int = 1, rotation: float = DISC_ROTATION, jitter_seed: Optional[int] = None) -> CurvedMesh:
    """
    Unit disc from six hexagon sectors, each split into n^2 triangles whose
    vertices sit on concentric rings. Edges on the outer ring carry nodes on
    the unit circle at evenly spaced angles; the displacement is blended
    linearly into the element so that all other edges stay straight.
    """
    if n < 1:
        raise ValueError(f"number of subdivisions must be positive, got {n}")
    vertices: Dict[Tuple[int, int, int], np.ndarray] = {}
    angles: Dict[Tuple[int, int, int], float] = {}
    for sector in range(6):
        for i in range(n + 1):
            for j in range(n + 1 - i):
                vertices[sector, i, j], angles[sector, i, j] = _disc_vertex(sector, i, j, n, rotation)
    interior = [key for key in vertices if 0 < key[1] + key[2] < n and key[2] > 0]
    vertices = _jitter(vertices, interior, 1.0 / n, jitter_seed)

    # the ray j = 0 of a sector is the ray j = level of the previous one
    def vertex(sector, i, j):
        if i + j == 0:
            return vertices[0, 0, 0], None
        if j == 0:
            previous = (sector - 1) % 6
            return vertices[previous, 0, i], angles[sector, i, 0]
        return vertices[sector, i, j], angles[sector, i, j]

    elements = []
    for sector in range(6):
        for i in range(n):
            for j in range(n - i):
                corners = [vertex(sector, i, j), vertex(sector, i + 1, j), vertex(sector, i, j + 1)]
                elements.append(_disc_element(p, corners, n, on_ring=(i + j + 1 == n)))
                if i + j < n - 1:
                    corners = [vertex(sector, i + 1, j), vertex(sector, i + 1, j + 1), vertex(sector, i, j + 1)]
                    elements.append(_disc_element(p, corners, n, on_ring=False))
    logger.debug(f"generated disc mesh with {len(elements)} elements of degree {p}")
    return CurvedMesh(elements)


def _disc_element(p: int, corners, n: int, on_ring: bool) -> BezierTriangle:
    """ corners as (position, angle); with on_ring the edge from corner 1 to corner 2 lies on the unit circle """
    a, b, c = (np.asarray(position) for position, _ in corners)
    nodes = _affine_nodes(p, a, b, c)
    if not on_ring or p == 1:
        return BezierTriangle(nodes)

    angle_b, angle_c = corners[1][1], corners[2][1]
    if angle_c < angle_b:
        angle_c += 2.0 * math.pi
    indices = multi_indices(p)
    weight_b, weight_c = indices[:, 1] / p, indices[:, 2] / p
    on_edge = weight_b + weight_c
    ratio = np.divide(weight_c, on_edge, out=np.zeros_like(on_edge), where=on_edge > 0.0)
    angle = angle_b + ratio * (angle_c - angle_b)
    chord = b + ratio[:, None] * (c - b)
    displacement = np.column_stack([np.cos(angle), np.sin(angle)]) - chord
    nodes = nodes + on_edge[:, None] * displacement
    return BezierTriangle.from_nodes(nodes)
