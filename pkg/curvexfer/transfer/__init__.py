from .pairing import ElementPairing, brute_force_pairing, expanding_front, find_first_pair
from .projection import (ConservationReport, ElementMassMatrix, assemble_element_mass, conservation_report,
                         donor_integral_on_target, rhs_for_element, transfer_field)
