"""Velocity-space collision laboratory bindings."""

from ._core import (
    InputError,
    NumericalAbort,
    cell_centers,
    cfl_limit,
    cube_kernel_average,
    dissipation,
    eta,
    fisher,
    gamma2_probe,
    hydrodynamics,
    initial,
    load_snapshot,
    run_series,
    save_snapshot,
    step,
)

__all__ = [
    "InputError",
    "NumericalAbort",
    "cell_centers",
    "cfl_limit",
    "cube_kernel_average",
    "dissipation",
    "eta",
    "fisher",
    "gamma2_probe",
    "hydrodynamics",
    "initial",
    "load_snapshot",
    "run_series",
    "save_snapshot",
    "step",
]
