"""Discrete Lagrangian systems and the shadowing engine."""

from anti_orbits.dls.critical import find_critical_point, phi_eval
from anti_orbits.dls.fields import Box, Coupling, Potential
from anti_orbits.dls.oracle import newton_oracle
from anti_orbits.dls.shadow import Orbit, action_window, local_residuals, residual, shadow, sweep_once
from anti_orbits.dls.system import DLSystem, EdgeData, LagrangianPiece, build_system, check_split, gauge_transform
from anti_orbits.dls.twist import TwistMatrix, twist_matrix
from anti_orbits.dls.uniformity import UniformityReport, uniformity_report

__all__ = [
    "Box",
    "Coupling",
    "DLSystem",
    "EdgeData",
    "LagrangianPiece",
    "Orbit",
    "Potential",
    "TwistMatrix",
    "UniformityReport",
    "action_window",
    "build_system",
    "check_split",
    "find_critical_point",
    "gauge_transform",
    "local_residuals",
    "newton_oracle",
    "phi_eval",
    "residual",
    "shadow",
    "sweep_once",
    "twist_matrix",
    "uniformity_report",
]
