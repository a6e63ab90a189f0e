"""Cone-criterion hyperbolicity and stable/unstable directions."""

from anti_orbits.hyperbolicity.blocks import VariationalBlocks, consistency_error, standard_blocks, variational_blocks
from anti_orbits.hyperbolicity.cones import ConeReport, cone_verify, lyapunov_lower_bound, propagate
from anti_orbits.hyperbolicity.stable import stable_vector, unstable_vector

__all__ = [
    "ConeReport",
    "VariationalBlocks",
    "cone_verify",
    "consistency_error",
    "lyapunov_lower_bound",
    "propagate",
    "stable_vector",
    "standard_blocks",
    "unstable_vector",
    "variational_blocks",
]
