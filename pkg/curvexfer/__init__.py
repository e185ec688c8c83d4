__version__ = "0.1.1"

import logging

# library code never configures handlers, the command line does
logging.getLogger(__name__).addHandler(logging.NullHandler())

# import manager classes first, the built-in settings are loaded on import
from .settings import SettingsManager

from .errors import (CurveXferError, GeometryError, MeshFileError, CoincidentCurvesError, CoincidentEdgesError,
                     CornerAmbiguityError, DegreeError, ElementDegenerateError, FieldShapeMismatchError,
                     InvalidElementError, InvalidIntervalError, LocatePointError, MeshFormatError,
                     NoIntersectionError, TraversalStallError)

# import geometry
from .geometry import BezierCurve, BezierTriangle, CurvedPolygon, BivariatePolynomial
from .geometry import intersect_curves, intersect_triangles, integrate, locate_point, contains_point

# import meshes and fields
from .mesh import CurvedMesh, DiscreteField, ShapeBasis, refine, gen_square_mesh, gen_disc_mesh
from .mesh import nodal_interpolant, l2_norm, integrate_field, load_mesh, save_mesh, load_field, save_field

# import transfer
from .transfer import ElementPairing, ConservationReport, expanding_front, find_first_pair, brute_force_pairing
from .transfer import transfer_field, conservation_report, assemble_element_mass, rhs_for_element


def set_default_settings(settings_name_or_path: str):
    """ load built-in settings ('default' or 'strict') or a custom settings file by passing the path """
    SettingsManager.load_settings(settings_name_or_path)


def get_setting(section: str, key: str):
    """ value of a single setting of the currently loaded settings """
    return SettingsManager.get(section, key)
