import logging
import re
from typing import List, Optional

import numpy as np

from ..errors import FieldShapeMismatchError, InvalidElementError, MeshFormatError
from ..geometry.bezier_curve import max_degree
from ..geometry.bezier_triangle import BezierTriangle, is_valid, net_size
from .curved_mesh import CurvedMesh
from .discrete_field import DiscreteField

logger = logging.getLogger(__name__)

MESH_HEADER = re.compile(r"^curvemesh v1 degree=(\d+) elements=(\d+)$")
FIELD_HEADER = re.compile(r"^curvefield v1 degree=(\d+) elements=(\d+)$")


def _format(values) -> str:
    return " ".join("%.17g" % value for value in values)


def _read_lines(path) -> List[str]:
    with open(path, "r") as f:
        return [line.strip() for line in f if line.strip()]


def _parse_header(path, lines: List[str], pattern, kind: str):
    if not lines:
        raise MeshFormatError(path, None, f"empty {kind} file")
    match = pattern.match(lines[0])
    if match is None:
        raise MeshFormatError(path, 1, f"expected a '{kind} v1 degree=<p> elements=<k>' header, found '{lines[0]}'")
    degree, count = int(match.group(1)), int(match.group(2))
    if len(lines) - 1 != count:
        raise MeshFormatError(path, len(lines), f"header announces {count} elements but {len(lines) - 1} lines follow")
    return degree, count


def _parse_row(path, line_number: int, line: str) -> np.ndarray:
    try:
        values = np.array([float(token) for token in line.split()])
    except ValueError:
        raise MeshFormatError(path, line_number, f"cannot parse '{line}' as real numbers") from None
    if not np.all(np.isfinite(values)):
        raise MeshFormatError(path, line_number, "non-finite value")
    return values


def save_mesh(mesh: CurvedMesh, path):
    """ standard node coordinates of every element, x and y interleaved, 17 significant digits """
    with open(path, "w") as f:
        f.write(f"curvemesh v1 degree={mesh.degree} elements={len(mesh)}\n")
        for element in mesh:
            f.write(_format(element.nodes.ravel()) + "\n")


def load_mesh(path, expected_degree: Optional[int] = None) -> CurvedMesh:
    lines = _read_lines(path)
    degree, count = _parse_header(path, lines, MESH_HEADER, "curvemesh")
    if not 1 <= degree <= max_degree():
        raise MeshFormatError(path, 1, f"unsupported degree {degree}, the limit is {max_degree()}")
    if expected_degree is not None and degree != expected_degree:
        raise MeshFormatError(path, 1, f"mesh has degree {degree}, expected {expected_degree}")

    size = 2 * net_size(degree)
    elements = []
    for element_id, line in enumerate(lines[1:]):
        values = _parse_row(path, element_id + 2, line)
        if values.size != size:
            raise MeshFormatError(path, element_id + 2, f"element {element_id} has {values.size} values, "
                                                        f"degree {degree} needs {size}")
        element = BezierTriangle.from_nodes(values.reshape(-1, 2))
        if not is_valid(element):
            raise InvalidElementError(element_id)
        elements.append(element)
    logger.debug(f"loaded mesh {path} with {count} elements of degree {degree}")
    return CurvedMesh(elements, validate=False)


def save_field(field: DiscreteField, path):
    with open(path, "w") as f:
        f.write(f"curvefield v1 degree={field.degree} elements={len(field)}\n")
        for row in field.coefficients:
            f.write(_format(row) + "\n")


def load_field(path, mesh: Optional[CurvedMesh] = None) -> DiscreteField:
    """ field coefficients; with a mesh, the shape is checked against it """
    lines = _read_lines(path)
    degree, count = _parse_header(path, lines, FIELD_HEADER, "curvefield")
    size = net_size(degree)
    rows = []
    for element_id, line in enumerate(lines[1:]):
        values = _parse_row(path, element_id + 2, line)
        if values.size != size:
            raise FieldShapeMismatchError((count, size), (count, values.size), element_id=element_id)
        rows.append(values)
    field = DiscreteField(degree, np.array(rows).reshape(count, size))
    if mesh is not None:
        field.check_mesh(mesh)
    return field
