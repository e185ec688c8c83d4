from .curved_mesh import CurvedMesh, ElementQuadrature, element_quadrature, refine
from .discrete_field import DiscreteField, integrate_field, l2_norm, nodal_interpolant
from .generators import gen_disc_mesh, gen_square_mesh
from .mesh_io import load_field, load_mesh, save_field, save_mesh
from .shape_basis import ShapeBasis, build_shape_basis
