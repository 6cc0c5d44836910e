"""Nodal-domain non-uniqueness laboratory for quantum hydrodynamics."""

from ._qhdlab import (
    ConfigError,
    Grid,
    __version__,
    bohm_potential,
    current,
    density,
    energy_and_mass,
    first_excited_state,
    hermite_evolve,
    two_level_state,
    recover_phases,
    run_report,
    slice_components,
    split_step,
    stitch,
)

__all__ = [
    "ConfigError",
    "Grid",
    "__version__",
    "bohm_potential",
    "current",
    "density",
    "energy_and_mass",
    "first_excited_state",
    "hermite_evolve",
    "two_level_state",
    "recover_phases",
    "run_report",
    "slice_components",
    "split_step",
    "stitch",
]
