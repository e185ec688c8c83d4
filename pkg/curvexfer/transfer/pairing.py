import logging
from collections import deque
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import GeometryError, NoIntersectionError
from ..geometry.bezier_triangle import BezierTriangle
from ..geometry.curved_polygon import CurvedPolygon
from ..geometry.triangle_intersection import intersect_triangles
from ..mesh.curved_mesh import CurvedMesh
from ..settings import SettingsManager

logger = logging.getLogger(__name__)


class ElementPairing:
    """
    Common refinement of a target and a donor mesh: for every target element
    the donor elements it intersects with positive area, and the curved
    polygons of each such intersection.

    probe_count counts the triangle intersections computed while building the
    pairing, cached pairs are not probed twice.
    """

    def __init__(self, target_size: int):
        self._donors: List[List[int]] = [[] for _ in range(target_size)]
        self._polygons: Dict[Tuple[int, int], List[CurvedPolygon]] = {}
        self._probed: Dict[Tuple[int, int], bool] = {}
        self.probe_count = 0

    def __len__(self) -> int:
        return len(self._donors)

    def __repr__(self) -> str:
        return f"ElementPairing(targets={len(self._donors)}, pairs={self.pair_count}, probes={self.probe_count})"

    @property
    def pair_count(self) -> int:
        return sum(len(donors) for donors in self._donors)

    def donors(self, target_id: int) -> List[int]:
        return self._donors[target_id]

    def polygons(self, target_id: int, donor_id: int) -> List[CurvedPolygon]:
        return self._polygons.get((target_id, donor_id), [])

    def pairs(self) -> Iterator[Tuple[int, int]]:
        for target_id, donors in enumerate(self._donors):
            for donor_id in donors:
                yield target_id, donor_id

    def intersection_area(self, target_id: int) -> float:
        return float(sum(polygon.area for donor_id in self._donors[target_id]
                         for polygon in self.polygons(target_id, donor_id)))

    def same_pairs(self, other: "ElementPairing") -> bool:
        return len(self) == len(other) and all(sorted(a) == sorted(b) for a, b in zip(self._donors, other._donors))

    def probe(self, target: CurvedMesh, target_id: int, donor: CurvedMesh, donor_id: int) -> bool:
        """ whether the two elements intersect with positive area, recording the pair if so """
        key = (target_id, donor_id)
        if key in self._probed:
            return self._probed[key]
        self.probe_count += 1
        intersecting = False
        if _boxes_overlap(target.boxes[target_id], donor.boxes[donor_id]):
            polygons = _intersection(target[target_id], target_id, donor[donor_id], donor_id)
            if polygons:
                self._polygons[key] = polygons
                self._donors[target_id].append(donor_id)
                intersecting = True
        self._probed[key] = intersecting
        return intersecting

    def finish(self):
        for donors in self._donors:
            donors.sort()


def _boxes_overlap(a: np.ndarray, b: np.ndarray) -> bool:
    return a[0] <= b[1] and b[0] <= a[1] and a[2] <= b[3] and b[2] <= a[3]


def _intersection(target_elt: BezierTriangle, target_id: int, donor_elt: BezierTriangle,
                  donor_id: int) -> List[CurvedPolygon]:
    try:
        polygons = intersect_triangles(target_elt, donor_elt)
    except GeometryError as err:
        raise err.with_pair(target_id, donor_id)
    scale = max(target_elt.diameter, donor_elt.diameter)
    tolerance = SettingsManager.get("transfer", "pair_area_tolerance") * scale ** 2
    if sum(polygon.area for polygon in polygons) <= tolerance:
        return []
    return polygons


def _candidates_by_distance(target: CurvedMesh, target_id: int, donor: CurvedMesh) -> np.ndarray:
    """ donor elements whose bounding box meets the target element's, nearest box centre first """
    box = target.boxes[target_id]
    boxes = donor.boxes
    overlapping = np.flatnonzero((boxes[:, 0] <= box[1]) & (box[0] <= boxes[:, 1]) &
                                 (boxes[:, 2] <= box[3]) & (box[2] <= boxes[:, 3]))
    centroid = target.centroid(target_id)
    centres = np.column_stack([boxes[overlapping, :2].mean(axis=1), boxes[overlapping, 2:].mean(axis=1)])
    return overlapping[np.argsort(np.linalg.norm(centres - centroid, axis=1), kind="stable")]


def _search_first(pairing: ElementPairing, target: CurvedMesh, target_id: int, donor: CurvedMesh) -> int:
    for donor_id in _candidates_by_distance(target, target_id, donor):
        if pairing.probe(target, target_id, donor, int(donor_id)):
            return int(donor_id)
    raise NoIntersectionError(target_id)


def find_first_pair(target: CurvedMesh, target_id: int, donor: CurvedMesh) -> int:
    """ brute-force search for one donor element meeting target element target_id with positive area """
    return _search_first(ElementPairing(len(target)), target, target_id, donor)


def _local_search(pairing: ElementPairing, target: CurvedMesh, target_id: int, donor: CurvedMesh,
                  seeds: Sequence[int]) -> Tuple[List[int], List[int]]:
    """
    Breadth-first search over donor adjacency from the seeds. Returns the
    intersecting donor elements and the first layer of donor elements around
    them that do not intersect.
    """
    found, layer = [], []
    seen = set()
    frontier = deque()
    for seed in seeds:
        if seed in seen:
            continue
        seen.add(seed)
        if pairing.probe(target, target_id, donor, seed):
            found.append(seed)
            frontier.append(seed)
    if not found:
        first = _search_first(pairing, target, target_id, donor)
        seen.add(first)
        found.append(first)
        frontier.append(first)

    while frontier:
        current = frontier.popleft()
        for neighbour in donor.neighbours(current):
            if neighbour in seen:
                continue
            seen.add(neighbour)
            if pairing.probe(target, target_id, donor, neighbour):
                found.append(neighbour)
                frontier.append(neighbour)
            else:
                layer.append(neighbour)
    return found, layer


def expanding_front(target: CurvedMesh, donor: CurvedMesh, seed_hint: Optional[int] = None) -> ElementPairing:
    """
    Pairing of every target element with the donor elements it intersects.

    Target elements are visited breadth first over target adjacency. Each
    one is seeded with the donor elements found for its already processed
    neighbours together with their first non-intersecting layer, so a brute
    force search is needed only once per connected component of the target.
    seed_hint names a donor element known to meet target element 0.
    """
    pairing = ElementPairing(len(target))
    seeds: Dict[int, List[int]] = {}
    if seed_hint is not None:
        seeds[0] = [int(seed_hint)]
    processed = np.zeros(len(target), dtype=bool)
    queued = np.zeros(len(target), dtype=bool)
    components = 0

    for start in range(len(target)):
        if queued[start]:
            continue
        components += 1
        queued[start] = True
        queue = deque([start])
        while queue:
            target_id = queue.popleft()
            found, layer = _local_search(pairing, target, target_id, donor, seeds.pop(target_id, []))
            processed[target_id] = True
            for neighbour in target.neighbours(target_id):
                if processed[neighbour]:
                    continue
                seeds.setdefault(neighbour, []).extend(found + layer)
                if not queued[neighbour]:
                    queued[neighbour] = True
                    queue.append(neighbour)

    pairing.finish()
    logger.debug(f"expanding front paired {len(target)} target elements with {len(donor)} donor elements: "
                 f"{pairing.pair_count} pairs, {pairing.probe_count} probes, {components} components")
    return pairing


def brute_force_pairing(target: CurvedMesh, donor: CurvedMesh) -> ElementPairing:
    """ every target element probed against every donor element whose bounding box it meets """
    pairing = ElementPairing(len(target))
    for target_id in range(len(target)):
        for donor_id in _candidates_by_distance(target, target_id, donor):
            pairing.probe(target, target_id, donor, int(donor_id))
        if not pairing.donors(target_id):
            raise NoIntersectionError(target_id)
    pairing.finish()
    return pairing
