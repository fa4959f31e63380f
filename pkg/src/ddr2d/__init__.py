"""Arbitrary-order discrete rot-rot complex on polygonal meshes of the unit
square, with structural verifiers (exactness, commutation, stability) and a
stabilized saddle-point scheme for the quad-rot problem.
"""

from .mesh import (Mesh, build_from_polygons, build_structured_mesh,
                   load_mesh, mesh_diagnostics, save_mesh, validate_mesh)
from .operators import (ComplexOps, interpolate_Sigma, interpolate_V,
                        interpolate_W)
from .scheme import (ErrorRecord, SaddleSystem, assemble, convergence_study,
                     error_report, rates, solve)
from .spaces import local_dof_count, space_layout
from .verify import (check_commutation, check_exactness, estimate_poincare,
                     numerical_rank)

__all__ = [
    "Mesh", "build_from_polygons", "build_structured_mesh", "load_mesh",
    "save_mesh", "validate_mesh", "mesh_diagnostics",
    "ComplexOps", "interpolate_V", "interpolate_Sigma", "interpolate_W",
    "space_layout", "local_dof_count",
    "check_exactness", "check_commutation", "estimate_poincare",
    "numerical_rank",
    "assemble", "solve", "error_report", "rates", "convergence_study",
    "SaddleSystem", "ErrorRecord",
]

__version__ = "0.1.0"
