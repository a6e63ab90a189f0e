"""The standard map in Hamiltonian and Lagrangian form, with its closed-form shadowing operator."""

from anti_orbits.standard_map.dynamics import map_backward, map_forward, map_jacobian, orbit_from_map, step_lagrangian
from anti_orbits.standard_map.params import StandardMapParams, lambda0, q_symbols
from anti_orbits.standard_map.shadowing import (
    DecayReport,
    decay_check,
    effective_params,
    lagrangian_residual,
    newton_orbit,
    quotient_project,
    residual_profile,
    shadow_code,
)

__all__ = [
    "DecayReport",
    "StandardMapParams",
    "decay_check",
    "effective_params",
    "lagrangian_residual",
    "lambda0",
    "map_backward",
    "map_forward",
    "map_jacobian",
    "newton_orbit",
    "orbit_from_map",
    "q_symbols",
    "quotient_project",
    "residual_profile",
    "shadow_code",
    "step_lagrangian",
]
