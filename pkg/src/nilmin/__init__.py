"""Minimal surfaces in the Heisenberg group from harmonic maps into the disk.

The package reconstructs nowhere-vertical conformal minimal immersions of
the Heisenberg group from their disk-valued harmonic Gauss maps, verifies
the differential identities the construction rests on, and exports sampled
surfaces as meshes with residual reports.
"""

from ._version import __version__
from .numerics import (EvaluationError, Polyline, Trajectory, WirtingerJet2,
                       path_integrate, rk4_solve, rk4_step, wirtinger_jet)
from .nil3 import (DegenerateImmersionError, ImmersionSample, OutOfDiskError,
                   ResidualEntry, ResidualReport, Tolerances, abresch_rosenberg,
                   ambient_from_frame, conformality_residual, connection_coeffs,
                   covariant_accelerations, fiber_rotation, frame_coordinates,
                   gauss_from_normal, induced_metric_factor, left_translate,
                   matching_translation, metric_from_sample, minimality_residual,
                   unit_normal)
from .maps import (DiskDomain, GaussMap, MobiusIsometry, OutOfDomainError,
                   RectDomain, antiholomorphy_margin, eta_from_g, from_callable,
                   harmonic_residual, hopf_coefficient, hopf_holomorphy_residual,
                   minkowski_factor, mobius_apply)
from .weierstrass import (GridSpec, ImmersionGrid, IntegrationConfig,
                          IntegrationFailure, PreconditionFailure, f_integrands,
                          h_integrand, integrability_residual, integrate_immersion,
                          integrate_path, path_independence_check, second_derivatives)
from .gallery import (EXAMPLE_NAMES, GallerySurface, HelicoidProfile, build_example,
                      conjugate_semitrough, helicoid, hemisphere, semitrough,
                      translation_invariant)
from .exprmap import ExpressionError, expression_jet_fn, parse_expression
from .mesh import SurfaceMesh, build_mesh, write_obj, write_ply
from .report import ReportDocument, precondition_report, run_verification

__all__ = [
    "__version__",
    # numerics
    "EvaluationError", "Polyline", "Trajectory", "WirtingerJet2",
    "path_integrate", "rk4_solve", "rk4_step", "wirtinger_jet",
    # geometry
    "DegenerateImmersionError", "ImmersionSample", "OutOfDiskError",
    "ResidualEntry", "ResidualReport", "Tolerances", "abresch_rosenberg",
    "ambient_from_frame", "conformality_residual", "connection_coeffs",
    "covariant_accelerations", "fiber_rotation", "frame_coordinates",
    "gauss_from_normal", "induced_metric_factor", "left_translate",
    "matching_translation", "metric_from_sample", "minimality_residual",
    "unit_normal",
    # maps
    "DiskDomain", "GaussMap", "MobiusIsometry", "OutOfDomainError", "RectDomain",
    "antiholomorphy_margin", "eta_from_g", "from_callable", "harmonic_residual",
    "hopf_coefficient", "hopf_holomorphy_residual", "minkowski_factor",
    "mobius_apply",
    # reconstruction
    "GridSpec", "ImmersionGrid", "IntegrationConfig", "IntegrationFailure",
    "PreconditionFailure", "f_integrands", "h_integrand", "integrability_residual",
    "integrate_immersion", "integrate_path", "path_independence_check",
    "second_derivatives",
    # gallery
    "EXAMPLE_NAMES", "GallerySurface", "HelicoidProfile", "build_example",
    "conjugate_semitrough", "helicoid", "hemisphere", "semitrough",
    "translation_invariant",
    # expressions
    "ExpressionError", "expression_jet_fn", "parse_expression",
    # mesh / report
    "SurfaceMesh", "build_mesh", "write_obj", "write_ply",
    "ReportDocument", "precondition_report", "run_verification",
]
