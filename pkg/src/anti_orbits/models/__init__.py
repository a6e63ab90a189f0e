"""Model zoo: kick maps, the wide-strip billiard and the separatrix map."""

from anti_orbits.models.billiard import (
    StripBilliardSpec,
    billiard_code,
    distance_coupling,
    distance_piece,
    make_strip_billiard,
    reflection_check,
    reflection_defect,
)
from anti_orbits.models.kick import KickMapSpec, kick_code, kick_residual, make_kick_map, standard_map_system
from anti_orbits.models.lifting import LatticeLift, code_from_points, random_lifted_code, unfold, winding_of
from anti_orbits.models.registry import BuiltModel, parse_model
from anti_orbits.models.sepmap import (
    SepMapSpec,
    code_from_path,
    make_sepmap,
    random_path,
    sepmap_generating_defect,
    sepmap_labels,
    unfold_path,
)

__all__ = [
    "BuiltModel",
    "KickMapSpec",
    "LatticeLift",
    "SepMapSpec",
    "StripBilliardSpec",
    "billiard_code",
    "code_from_path",
    "code_from_points",
    "distance_coupling",
    "distance_piece",
    "kick_code",
    "kick_residual",
    "make_kick_map",
    "make_sepmap",
    "make_strip_billiard",
    "parse_model",
    "random_lifted_code",
    "random_path",
    "reflection_check",
    "reflection_defect",
    "sepmap_generating_defect",
    "sepmap_labels",
    "standard_map_system",
    "unfold",
    "unfold_path",
    "winding_of",
]
