"""Numerical experiments on the Liouville embedding of universal Teichmüller space.

Liouville measure of boxes of geodesics, measured laminations of holomorphic
quadratic differentials, affine Teichmüller deformations and moduli of curve
families, together with drivers that compare normalized moduli of deformed
families against lamination masses.
"""

from .disk_geometry import (BoundaryPoint, CircleMap, GeodesicBox, MoebiusMap, apply_moebius,
                            liouville_box, liouville_integral, pullback_liouville)
from .errors import (AccuracyError, ChartInjectivityError, ConfigError, InvalidBoxError,
                     NonTerminatingTrajectoryError, ResolutionError, TeichLabError)
from .experiments import (ApproachPath, ConvergenceRecord, run_lemma41,
                          run_liouville_asymptotics, run_theorem_main, sandwich_bounds)
from .lamination import LaminationMass, atom_scan, lamination_mass
from .modulus import (ModulusResult, Quadrilateral, disk_modulus, image_quadrilateral,
                      parallelogram_lower_bound, quad_modulus, rect_modulus)
from .quad_diff import (QuadraticDifferential, Trajectory, integrability_norm,
                        natural_parameter, trace_trajectory)
from .teich import (AffineTeichMap, DeformationParameter, apply_deformation, beltrami,
                    dilatation, disk_from_half_plane, geodesic_dilatation, geodesic_map,
                    half_plane_from_disk, rotate_parameter)

__version__ = "0.1.0"
