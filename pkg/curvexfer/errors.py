from typing import Optional, Tuple


class CurveXferError(Exception):
    """ base class of every error raised by curvexfer """


class GeometryError(CurveXferError):
    """ geometric or numeric failure, the command line reports these with exit code 2 """

    pair: Optional[Tuple[int, int]] = None

    def with_pair(self, target_id: int, donor_id: int) -> "GeometryError":
        """ attach the (target element, donor element) pair the failure occurred on """
        self.pair = (target_id, donor_id)
        self.args = (f"{self.args[0] if self.args else ''} (target element {target_id}, donor element {donor_id})",)
        return self


class MeshFileError(CurveXferError):
    """ malformed mesh or field input, the command line reports these with exit code 1 """


class InvalidIntervalError(GeometryError, ValueError):
    def __init__(self, start: float, end: float):
        super().__init__(f"invalid parameter interval [{start}, {end}], start must be smaller than end")
        self.start = start
        self.end = end


class DegreeError(GeometryError, ValueError):
    def __init__(self, degree: int, maximum: int, kind: str = "curve"):
        super().__init__(f"{kind} degree {degree} is not supported, degree must be between 0 and {maximum}")
        self.degree = degree
        self.maximum = maximum


class CoincidentCurvesError(GeometryError):
    """ the curves share a segment, so the set of intersections is not finite

        overlap holds ((s_start, s_end), (t_start, t_end)) when the shared segment is known,
        same_direction tells whether both curves traverse it the same way """

    def __init__(self, message: str, overlap=None, same_direction: Optional[bool] = None):
        super().__init__(message)
        self.overlap = overlap
        self.same_direction = same_direction


class CoincidentEdgesError(GeometryError):
    def __init__(self, edge_index_0: int, edge_index_1: int, detail: str = ""):
        super().__init__(f"edge {edge_index_0} of the first triangle and edge {edge_index_1} of the second triangle "
                         f"are coincident on the same algebraic curve{': ' + detail if detail else ''}")
        self.edge_index_0 = edge_index_0
        self.edge_index_1 = edge_index_1


class CornerAmbiguityError(GeometryError):
    pass


class TraversalStallError(GeometryError):
    pass


class LocatePointError(GeometryError):
    """ Newton's method did not converge while inverting a Bezier triangle """

    def __init__(self, point, last_iterate):
        super().__init__(f"locating point {tuple(point)} did not converge, last iterate (s, t) = {tuple(last_iterate)}")
        self.point = point
        self.last_iterate = last_iterate


class ElementDegenerateError(GeometryError):
    def __init__(self, element_id: Optional[int], detail: str = ""):
        super().__init__(f"element {element_id} is degenerate{': ' + detail if detail else ''}")
        self.element_id = element_id


class NoIntersectionError(GeometryError):
    def __init__(self, element_id: int):
        super().__init__(f"target element {element_id} is not covered by the donor mesh")
        self.element_id = element_id


class InvalidElementError(GeometryError):
    def __init__(self, element_id: int, detail: str = "jacobian determinant is not positive"):
        super().__init__(f"element {element_id} is invalid: {detail}")
        self.element_id = element_id


class MeshFormatError(MeshFileError, ValueError):
    def __init__(self, path, line: Optional[int], detail: str):
        location = f"{path}:{line}" if line is not None else f"{path}"
        super().__init__(f"{location}: {detail}")
        self.path = path
        self.line = line


class FieldShapeMismatchError(MeshFileError, ValueError):
    def __init__(self, expected: Tuple[int, int], found: Tuple[int, ...], element_id: Optional[int] = None):
        location = f" (first bad row: element {element_id})" if element_id is not None else ""
        super().__init__(f"field has shape {found}, but the mesh requires {expected} "
                         f"(elements, coefficients per element){location}")
        self.expected = expected
        self.found = found
        self.element_id = element_id
