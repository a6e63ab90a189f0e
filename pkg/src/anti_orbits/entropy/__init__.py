"""Topological-entropy lower bounds."""

from anti_orbits.entropy.spectral import SpectralReport, spectral_report, tmc_entropy, word_count_entropy
from anti_orbits.entropy.standard import EntropyBound, optimize_sigma, standard_map_entropy_bound

__all__ = [
    "EntropyBound",
    "SpectralReport",
    "optimize_sigma",
    "spectral_report",
    "standard_map_entropy_bound",
    "tmc_entropy",
    "word_count_entropy",
]
