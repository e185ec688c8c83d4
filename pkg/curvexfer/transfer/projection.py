import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..errors import ElementDegenerateError, GeometryError
from ..geometry.bezier_triangle import BezierTriangle
from ..geometry.curved_polygon import integrate
from ..geometry.kernels import weighted_gram
from ..mesh.curved_mesh import CurvedMesh, element_quadrature
from ..mesh.discrete_field import DiscreteField, integrate_field
from ..mesh.shape_basis import ShapeBasis
from ..settings import SettingsManager
from .pairing import ElementPairing, expanding_front

logger = logging.getLogger(__name__)


class ElementMassMatrix(NamedTuple):
    """ symmetric positive definite mass matrix of one element with its Cholesky factor """
    matrix: np.ndarray
    factor: tuple

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return cho_solve(self.factor, rhs)


def assemble_element_mass(target_elt: BezierTriangle, basis: ShapeBasis,
                          element_id: Optional[int] = None) -> ElementMassMatrix:
    """ (M)_ij = integral of phi_i phi_j over the element, by quadrature on the unit triangle """
    quadrature = element_quadrature(target_elt, 2 * basis.degree)
    values = basis.evaluate(quadrature.points[:, 0], quadrature.points[:, 1])
    matrix = weighted_gram(np.ascontiguousarray(values, dtype=np.float64),
                           np.ascontiguousarray(quadrature.weights, dtype=np.float64))
    try:
        factor = cho_factor(matrix)
    except LinAlgError:
        raise ElementDegenerateError(element_id, "mass matrix is not positive definite") from None
    return ElementMassMatrix(matrix, factor)


def rhs_for_element(target: CurvedMesh, target_id: int, pairing: ElementPairing, donor: CurvedMesh,
                    donor_field: DiscreteField) -> np.ndarray:
    """
    Mixed integrals of every target shape function against the donor field,
    summed over the intersections of the target element with its donor
    elements. The integrand is a polynomial product, so the polygon
    quadrature is exact.
    """
    basis = target.basis(target_id)
    degree = basis.degree + donor_field.degree
    total = np.zeros(basis.size)
    for donor_id in pairing.donors(target_id):
        donor_polynomial = donor.basis(donor_id).combination(donor_field.element(donor_id))

        def integrand(x, y):
            return basis.evaluate(x, y) * donor_polynomial.evaluate(x, y)[..., None]

        for polygon in pairing.polygons(target_id, donor_id):
            try:
                total += integrate(polygon, integrand, degree)
            except GeometryError as err:
                raise err.with_pair(target_id, donor_id)
    return total


def transfer_field(donor: CurvedMesh, donor_field: DiscreteField, target: CurvedMesh,
                   pairing: Optional[ElementPairing] = None, workers: Optional[int] = None) -> DiscreteField:
    """
    Galerkin projection of the donor field onto the discontinuous space of
    the target mesh, one local solve M_T t = M_TD d per target element.
    Worker threads default to SettingsManager.worker_count().
    """
    donor_field.check_mesh(donor)
    if pairing is None:
        pairing = expanding_front(target, donor)

    def solve(target_id: int) -> np.ndarray:
        mass = assemble_element_mass(target[target_id], target.basis(target_id), target_id)
        return mass.solve(rhs_for_element(target, target_id, pairing, donor, donor_field))

    workers = SettingsManager.worker_count(workers)
    if workers == 1:
        rows = [solve(target_id) for target_id in range(len(target))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(solve, range(len(target))))
    logger.debug(f"transferred a degree {donor_field.degree} field onto {len(target)} target elements "
                 f"with {workers} worker(s)")
    return DiscreteField(target.degree, np.array(rows))


class ConservationReport(NamedTuple):
    donor_integral: float
    target_integral: float
    donor_integral_on_target: Optional[float]
    relative_mismatch: float

    def csv_line(self) -> str:
        on_target = "" if self.donor_integral_on_target is None else "%.17g" % self.donor_integral_on_target
        return ",".join(["%.17g" % self.donor_integral, "%.17g" % self.target_integral, on_target,
                         "%.3e" % self.relative_mismatch])


def donor_integral_on_target(donor: CurvedMesh, donor_field: DiscreteField, pairing: ElementPairing) -> float:
    """ integral of the donor field over the target domain, summed over the common refinement """
    total = 0.0
    for target_id, donor_id in pairing.pairs():
        polynomial = donor.basis(donor_id).combination(donor_field.element(donor_id))
        for polygon in pairing.polygons(target_id, donor_id):
            try:
                total += float(integrate(polygon, polynomial))
            except GeometryError as err:
                raise err.with_pair(target_id, donor_id)
    return total


def conservation_report(donor: CurvedMesh, donor_field: DiscreteField, target: CurvedMesh,
                        target_field: DiscreteField, pairing: Optional[ElementPairing] = None) -> ConservationReport:
    """
    Integrals of both fields over their own meshes. With a pairing the
    target integral is compared against the donor integral over the target
    domain, otherwise against the donor integral over the donor mesh.
    """
    donor_integral = integrate_field(donor, donor_field)
    target_integral = integrate_field(target, target_field)
    on_target = None if pairing is None else donor_integral_on_target(donor, donor_field, pairing)
    reference = donor_integral if on_target is None else on_target
    mismatch = abs(target_integral - reference)
    if reference != 0.0:
        mismatch /= abs(reference)
    return ConservationReport(donor_integral, target_integral, on_target, mismatch)
