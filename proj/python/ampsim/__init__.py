"""Python access to the ampsim simulator core."""

from ._core import (
    InvalidInput,
    averaged_tts,
    classical_energy,
    critical_kappa,
    density_of_states,
    derive_seed,
    fit_exponential,
    forward_gap,
    gap_profile,
    scheme_kinds,
    sector_energies,
    standard_sets,
    success_probability,
    tts,
)

__all__ = [
    "InvalidInput",
    "averaged_tts",
    "classical_energy",
    "critical_kappa",
    "density_of_states",
    "derive_seed",
    "fit_exponential",
    "forward_gap",
    "gap_profile",
    "scheme_kinds",
    "sector_energies",
    "standard_sets",
    "success_probability",
    "tts",
]
