"""Pulsed frequency-degenerate parametric downconversion toolbox.

Crystal dispersion from Sellmeier data files, quasi-phase-matching and
group-velocity-matching design, joint spectral amplitudes with their
Schmidt-mode structure, and squeezing budgets versus crystal length and
pump power. See the ``pdcmodes`` command-line tool for file-based runs.
"""

from .errors import DomainError, PdcModesError, SolverError, ValidationError
from .dispersion import (
    CrystalModel,
    bundled_crystal_path,
    group_index,
    gvd,
    load_bundled_crystal,
    load_crystal,
    load_crystal_file,
    refractive_index,
    wavevector,
)
from .phasematch import (
    PdcConfig,
    TaylorDispersion,
    phase_mismatch,
    phasematch_hyperbola,
    poling_period,
    solve_cgvm,
    solve_cgvm_temperature,
    taylor_dispersion,
    taylor_phase_mismatch,
    walkoff_time,
)
from .jsa import (
    FrequencyGrid,
    JsaGrid,
    PumpPulse,
    SchmidtDecomposition,
    compute_jsa,
    default_grid,
    double_gaussian_analytics,
    double_gaussian_jsa,
    jsa_efficiency,
    pump_spectral_amplitude,
    schmidt_decompose,
)
from .squeezing import (
    SqueezingResult,
    beam_waist,
    length_scan,
    pdc_efficiency,
    peak_power,
    pulse_duration,
    squeezing_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "PdcModesError",
    "DomainError",
    "ValidationError",
    "SolverError",
    "CrystalModel",
    "load_crystal",
    "load_crystal_file",
    "load_bundled_crystal",
    "bundled_crystal_path",
    "refractive_index",
    "wavevector",
    "group_index",
    "gvd",
    "PdcConfig",
    "TaylorDispersion",
    "poling_period",
    "phase_mismatch",
    "taylor_dispersion",
    "taylor_phase_mismatch",
    "phasematch_hyperbola",
    "walkoff_time",
    "solve_cgvm",
    "solve_cgvm_temperature",
    "PumpPulse",
    "FrequencyGrid",
    "JsaGrid",
    "SchmidtDecomposition",
    "pump_spectral_amplitude",
    "default_grid",
    "compute_jsa",
    "schmidt_decompose",
    "jsa_efficiency",
    "double_gaussian_jsa",
    "double_gaussian_analytics",
    "SqueezingResult",
    "pulse_duration",
    "peak_power",
    "beam_waist",
    "pdc_efficiency",
    "squeezing_spectrum",
    "length_scan",
]
