import numpy as np

from curvexfer.errors import CornerAmbiguityError, FieldShapeMismatchError, GeometryError, NoIntersectionError
from curvexfer.geometry import BezierTriangle
from curvexfer.mesh import (CurvedMesh, DiscreteField, ShapeBasis, gen_disc_mesh, gen_square_mesh, integrate_field,
                            l2_norm, nodal_interpolant, refine)
from curvexfer.transfer import (ConservationReport, ElementPairing, assemble_element_mass, brute_force_pairing,
                                conservation_report, expanding_front, find_first_pair, rhs_for_element, transfer_field)

# odd subdivision with jitter keeps the disc vertices off the donor edges
DONOR = gen_square_mesh(1, 3, jitter_seed=7)
TARGET = gen_disc_mesh(2, 2)


def linear(x, y):
    return 2.0 * x - y + 1.0


class TestTransfer:
    def main(self):
        self.execute_tests()

    def execute_tests(self):
        print(f"\n{self.__class__.__name__} started:")
        self.test_unit_mass_matrix()
        self.test_mass_matrix_of_curved_element()
        self.test_find_first_pair()
        self.test_no_intersection()
        self.test_pairing_matches_brute_force()
        self.test_pairing_on_refined_curved_pair()
        self.test_pairing_covers_target()
        self.test_seed_hint()
        self.test_rhs_of_constant()
        self.test_constant_is_preserved()
        self.test_linear_field_is_reproduced()
        self.test_self_transfer()
        self.test_projection_is_idempotent()
        self.test_threads_agree()
        self.test_conservation_report()
        self.test_field_mismatch()
        self.test_error_carries_pair()

    def test_unit_mass_matrix(self):
        print(" -> test_unit_mass_matrix: ", end="")
        unit = BezierTriangle([(0, 0), (1, 0), (0, 1)])
        mass = assemble_element_mass(unit, ShapeBasis(unit))
        np.testing.assert_allclose(mass.matrix, np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]]) / 24.0, atol=1e-15)
        np.testing.assert_allclose(mass.solve(mass.matrix @ np.array([1.0, -2.0, 0.5])), [1.0, -2.0, 0.5], atol=1e-12)
        print("successful")

    def test_mass_matrix_of_curved_element(self):
        print(" -> test_mass_matrix_of_curved_element: ", end="")
        element_id = next(index for index, element in enumerate(TARGET) if not element.is_affine())
        mass = assemble_element_mass(TARGET[element_id], TARGET.basis(element_id), element_id)
        np.testing.assert_allclose(mass.matrix, mass.matrix.T, atol=0.0)
        assert np.all(np.linalg.eigvalsh(mass.matrix) > 0.0)
        # the basis sums to one, so all entries add up to the element area
        assert abs(mass.matrix.sum() - TARGET.element_area(element_id)) < 1e-13
        print("successful")

    def test_find_first_pair(self):
        print(" -> test_find_first_pair: ", end="")
        for target_id in (0, 5, len(TARGET) - 1):
            donor_id = find_first_pair(TARGET, target_id, DONOR)
            assert 0 <= donor_id < len(DONOR)
            pairing = ElementPairing(len(TARGET))
            assert pairing.probe(TARGET, target_id, DONOR, donor_id)
            assert pairing.probe_count == 1 and pairing.probe(TARGET, target_id, DONOR, donor_id)
            assert pairing.probe_count == 1 and pairing.donors(target_id) == [donor_id]
        print("successful")

    def test_no_intersection(self):
        print(" -> test_no_intersection: ", end="")
        far = CurvedMesh([BezierTriangle([(10, 10), (11, 10), (10, 11)])])
        try:
            find_first_pair(far, 0, DONOR)
        except NoIntersectionError as err:
            assert err.element_id == 0
        else:
            raise AssertionError("expected NoIntersectionError")
        try:
            expanding_front(far, DONOR)
        except NoIntersectionError:
            pass
        else:
            raise AssertionError("expected NoIntersectionError")
        print("successful")

    def test_pairing_matches_brute_force(self):
        print(" -> test_pairing_matches_brute_force: ", end="")
        front = expanding_front(TARGET, DONOR)
        brute = brute_force_pairing(TARGET, DONOR)
        assert front.same_pairs(brute)
        assert front.pair_count == brute.pair_count and front.pair_count >= len(TARGET)
        assert all(front.donors(target_id) == sorted(front.donors(target_id)) for target_id in range(len(TARGET)))
        assert sorted(front.pairs()) == sorted(brute.pairs())
        print("successful")

    def test_pairing_on_refined_curved_pair(self):
        print(" -> test_pairing_on_refined_curved_pair: ", end="")
        # no jitter: the disc and the square share the vertex at the origin
        target = refine(gen_disc_mesh(2, 2))
        donor = refine(gen_square_mesh(2, 2))
        front = expanding_front(target, donor)
        assert front.same_pairs(brute_force_pairing(target, donor))
        for target_id in range(len(target)):
            assert abs(front.intersection_area(target_id) - target.element_area(target_id)) < 1e-10
        print("successful")

    def test_pairing_covers_target(self):
        print(" -> test_pairing_covers_target: ", end="")
        pairing = expanding_front(TARGET, DONOR)
        for target_id in range(len(TARGET)):
            assert abs(pairing.intersection_area(target_id) - TARGET.element_area(target_id)) < 1e-11
            for donor_id in pairing.donors(target_id):
                assert pairing.polygons(target_id, donor_id)
        assert pairing.polygons(0, -1) == []
        print("successful")

    def test_seed_hint(self):
        print(" -> test_seed_hint: ", end="")
        hint = find_first_pair(TARGET, 0, DONOR)
        assert expanding_front(TARGET, DONOR, seed_hint=hint).same_pairs(expanding_front(TARGET, DONOR))
        print("successful")

    def test_rhs_of_constant(self):
        print(" -> test_rhs_of_constant: ", end="")
        pairing = expanding_front(TARGET, DONOR)
        ones = nodal_interpolant(DONOR, lambda x, y: np.ones_like(x))
        for target_id in (0, len(TARGET) - 1):
            rhs = rhs_for_element(TARGET, target_id, pairing, DONOR, ones)
            mass = assemble_element_mass(TARGET[target_id], TARGET.basis(target_id), target_id)
            np.testing.assert_allclose(rhs, mass.matrix.sum(axis=1), atol=1e-11)
        print("successful")

    def test_constant_is_preserved(self):
        print(" -> test_constant_is_preserved: ", end="")
        donor_field = nodal_interpolant(DONOR, lambda x, y: np.full_like(x, 3.0))
        target_field = transfer_field(DONOR, donor_field, TARGET, workers=1)
        np.testing.assert_allclose(target_field.coefficients, 3.0, atol=1e-10)
        print("successful")

    def test_linear_field_is_reproduced(self):
        print(" -> test_linear_field_is_reproduced: ", end="")
        target_field = transfer_field(DONOR, nodal_interpolant(DONOR, linear), TARGET, workers=1)
        assert target_field.degree == 2 and len(target_field) == len(TARGET)
        assert l2_norm(TARGET, target_field, linear) < 1e-10
        print("successful")

    def test_self_transfer(self):
        print(" -> test_self_transfer: ", end="")
        mesh = gen_square_mesh(2, 2)
        field = nodal_interpolant(mesh, lambda x, y: np.cos(x) * np.exp(y))
        pairing = expanding_front(mesh, mesh)
        assert pairing.pair_count == len(mesh)
        assert all(pairing.donors(index) == [index] for index in range(len(mesh)))
        copied = transfer_field(mesh, field, mesh, pairing, workers=1)
        np.testing.assert_allclose(copied.coefficients, field.coefficients, atol=1e-11)
        print("successful")

    def test_projection_is_idempotent(self):
        print(" -> test_projection_is_idempotent: ", end="")
        donor_field = nodal_interpolant(DONOR, lambda x, y: np.sin(3.0 * x) * np.exp(y))
        target_field = transfer_field(DONOR, donor_field, TARGET, workers=1)
        again = transfer_field(TARGET, target_field, TARGET, workers=1)
        np.testing.assert_allclose(again.coefficients, target_field.coefficients, rtol=0.0, atol=1e-10)
        print("successful")

    def test_threads_agree(self):
        print(" -> test_threads_agree: ", end="")
        pairing = expanding_front(TARGET, DONOR)
        field = nodal_interpolant(DONOR, lambda x, y: np.sin(x) + np.cos(y))
        serial = transfer_field(DONOR, field, TARGET, pairing, workers=1)
        threaded = transfer_field(DONOR, field, TARGET, pairing, workers=3)
        np.testing.assert_array_equal(serial.coefficients, threaded.coefficients)
        print("successful")

    def test_conservation_report(self):
        print(" -> test_conservation_report: ", end="")
        pairing = expanding_front(TARGET, DONOR)
        donor_field = nodal_interpolant(DONOR, lambda x, y: np.exp(x ** 2) + 2.0 * y)
        target_field = transfer_field(DONOR, donor_field, TARGET, pairing, workers=1)
        report = conservation_report(DONOR, donor_field, TARGET, target_field, pairing)
        assert isinstance(report, ConservationReport)
        assert abs(report.donor_integral - integrate_field(DONOR, donor_field)) < 1e-12
        assert report.relative_mismatch <= 1e-12
        assert len(report.csv_line().split(",")) == 4

        without_pairing = conservation_report(DONOR, donor_field, TARGET, target_field)
        assert without_pairing.donor_integral_on_target is None
        assert without_pairing.csv_line().split(",")[2] == ""
        print("successful")

    def test_field_mismatch(self):
        print(" -> test_field_mismatch: ", end="")
        try:
            transfer_field(DONOR, DiscreteField.zeros(TARGET), TARGET)
        except FieldShapeMismatchError:
            pass
        else:
            raise AssertionError("expected FieldShapeMismatchError")
        print("successful")

    def test_error_carries_pair(self):
        print(" -> test_error_carries_pair: ", end="")
        err = CornerAmbiguityError("parallel tangents at a corner").with_pair(3, 11)
        assert isinstance(err, GeometryError) and err.pair == (3, 11)
        assert str(err) == "parallel tangents at a corner (target element 3, donor element 11)"
        print("successful")


if __name__ == "__main__":
    TestTransfer().main()
