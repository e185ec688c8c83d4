from typing import Callable, Optional

import numpy as np

from ..errors import FieldShapeMismatchError
from ..geometry.bezier_triangle import net_size
from .curved_mesh import CurvedMesh, element_quadrature

ScalarFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

# extra quadrature degree for references that are not polynomials
REFERENCE_EXCESS_DEGREE = 4


class DiscreteField:
    """ per-element coefficients over the global-coordinates shape basis, no sharing across elements """

    def __init__(self, degree: int, coefficients):
        coefficients = np.array(coefficients, dtype=np.float64)
        expected = net_size(degree)
        if coefficients.ndim != 2 or coefficients.shape[1] != expected:
            raise FieldShapeMismatchError((coefficients.shape[0] if coefficients.ndim else 0, expected), coefficients.shape)
        self.degree = degree
        self.coefficients = coefficients

    def __len__(self) -> int:
        return self.coefficients.shape[0]

    def __repr__(self) -> str:
        return f"DiscreteField(degree={self.degree}, elements={len(self)})"

    def element(self, index: int) -> np.ndarray:
        return self.coefficients[index]

    def check_mesh(self, mesh: CurvedMesh):
        expected = (len(mesh), net_size(mesh.degree))
        if self.coefficients.shape != expected:
            raise FieldShapeMismatchError(expected, self.coefficients.shape)

    @classmethod
    def zeros(cls, mesh: CurvedMesh) -> "DiscreteField":
        return cls(mesh.degree, np.zeros((len(mesh), net_size(mesh.degree))))

    def evaluate(self, mesh: CurvedMesh, index: int, x, y) -> np.ndarray:
        """ the field restricted to element index at physical points """
        return mesh.basis(index).evaluate(x, y) @ self.coefficients[index]


def nodal_interpolant(m: CurvedMesh, f: ScalarFunction) -> DiscreteField:
    """ coefficient i of every element is f at the element's standard node n_i """
    nodes = np.stack([element.nodes for element in m])
    values = np.asarray(f(nodes[..., 0], nodes[..., 1]), dtype=np.float64)
    return DiscreteField(m.degree, np.broadcast_to(values, nodes.shape[:2]))


def l2_norm(m: CurvedMesh, g: DiscreteField, reference: Optional[ScalarFunction] = None) -> float:
    """ ||g - reference||_2 over the mesh, or ||g||_2 without a reference """
    g.check_mesh(m)
    excess = REFERENCE_EXCESS_DEGREE if reference is not None else 0
    total = 0.0
    for index, element in enumerate(m):
        quadrature = element_quadrature(element, 2 * m.degree, excess)
        x, y = quadrature.points[:, 0], quadrature.points[:, 1]
        values = g.evaluate(m, index, x, y)
        if reference is not None:
            values = values - np.broadcast_to(reference(x, y), values.shape)
        total += float(quadrature.weights @ values ** 2)
    return float(np.sqrt(total))


def integrate_field(m: CurvedMesh, g: DiscreteField) -> float:
    """ exact integral of the field over the mesh """
    g.check_mesh(m)
    total = 0.0
    for index, element in enumerate(m):
        quadrature = element_quadrature(element, m.degree)
        total += float(quadrature.weights @ g.evaluate(m, index, quadrature.points[:, 0], quadrature.points[:, 1]))
    return total
