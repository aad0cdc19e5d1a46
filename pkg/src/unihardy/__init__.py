"""Numerical verification of weighted Hardy, Rellich and CKN inequalities
on homogeneous groups, reduced to the radial variable."""
from . import errors, group_model, jets, quadrature, radial, sharpness
from .functionals import *  # noqa: F401,F403
from .functionals import __all__ as _functionals_all
from .group_model import AbstractRadialModel, GroupModel, NormKind, mc_ball_moment, sphere_measure
from .sharpness import Kind, nonattainment_probe, rayleigh, scan_boundary, scan_origin, sharp_constant

__version__ = "0.1.0"

__all__ = list(_functionals_all) + [
    "AbstractRadialModel", "GroupModel", "Kind", "NormKind", "errors", "group_model", "jets",
    "mc_ball_moment", "nonattainment_probe", "quadrature", "radial", "rayleigh", "scan_boundary",
    "scan_origin", "sharp_constant", "sharpness", "sphere_measure",
]
