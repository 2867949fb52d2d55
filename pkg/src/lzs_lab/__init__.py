"""Steady-state and transient simulation of a driven dissipative qubit.

The package models a two-level system whose energy detuning is swept
sinusoidally through an avoided crossing while the environment dephases
and relaxes it.  A reference Bloch-equation integrator provides ground
truth; a family of rate treatments (multiphoton stationary sums,
harmonic-resolved modulated rates, period-averaged rates, and an
instantaneous Lorentzian rate) covers the fast-, intermediate-, and
slow-drive regimes.  A classifier reports which treatment a parameter
point supports, a three-level extension models microwave refrigeration
through a second crossover, and a sweep harness with CSV emission and
figure presets drives it all from configs or the `lzs-lab` CLI.
"""

from .bloch import (
    IntegrationError,
    PeriodicSteadyState,
    Trajectory,
    integrate,
    steady_state,
)
from .cooling import (
    CoolingResult,
    CoolingThresholdError,
    EpsPair,
    RawThreeLevel,
    ThreeLevelParams,
    ThreeLevelState,
    build_three_level,
    cool_steady,
    eps_from_flux,
    equilibrium_rho00,
    min_cooling_frequency,
)
from .params import (
    Freq,
    QubitParams,
    RawInputs,
    ValidationError,
    angular_to_mhz,
    angular_to_mk,
    build_params,
    ghz,
    mhz,
    params_to_raw,
    temperature_to_angular,
    thermal_population,
)
from .populations import (
    PopulationCurve,
    pop_apa,
    pop_nca,
    pop_nca_quadrature,
    pop_nca_steady,
    pop_prwa_stationary,
    pop_rwa_coherent,
    pop_rwa_stationary,
    pop_timedep,
    pop_timedep_quadrature,
    pop_timedep_steady,
)
from .presets import PRESETS, preset, preset_names
from .rates import (
    HarmonicRateTable,
    NonresonantTerm,
    RatePair,
    SingularRateError,
    ThreeLevelRates,
    harmonic_table,
    nonresonant_f,
    rate_nca,
    rate_prwa,
    rate_timedep,
    rates_threelevel,
)
from .regime import LABELS, RegimeReport, classify
from .specfun import bessel_j, bessel_row, truncation_order
from .sweep import (
    LoadedSweep,
    ParseError,
    SweepResult,
    SweepSpec,
    compare,
    emit_csv,
    load_csv,
    parse_config,
    run_sweep,
)

__all__ = [
    "CoolingResult",
    "CoolingThresholdError",
    "EpsPair",
    "Freq",
    "HarmonicRateTable",
    "IntegrationError",
    "LABELS",
    "LoadedSweep",
    "NonresonantTerm",
    "PRESETS",
    "ParseError",
    "PeriodicSteadyState",
    "PopulationCurve",
    "QubitParams",
    "RatePair",
    "RawInputs",
    "RawThreeLevel",
    "RegimeReport",
    "SingularRateError",
    "SweepResult",
    "SweepSpec",
    "ThreeLevelParams",
    "ThreeLevelRates",
    "ThreeLevelState",
    "Trajectory",
    "ValidationError",
    "angular_to_mhz",
    "angular_to_mk",
    "bessel_j",
    "bessel_row",
    "build_params",
    "build_three_level",
    "classify",
    "compare",
    "cool_steady",
    "emit_csv",
    "eps_from_flux",
    "equilibrium_rho00",
    "ghz",
    "harmonic_table",
    "integrate",
    "load_csv",
    "mhz",
    "min_cooling_frequency",
    "nonresonant_f",
    "params_to_raw",
    "parse_config",
    "pop_apa",
    "pop_nca",
    "pop_nca_quadrature",
    "pop_nca_steady",
    "pop_prwa_stationary",
    "pop_rwa_coherent",
    "pop_rwa_stationary",
    "pop_timedep",
    "pop_timedep_quadrature",
    "pop_timedep_steady",
    "preset",
    "preset_names",
    "rate_nca",
    "rate_prwa",
    "rate_timedep",
    "rates_threelevel",
    "run_sweep",
    "steady_state",
    "temperature_to_angular",
    "thermal_population",
    "truncation_order",
]
