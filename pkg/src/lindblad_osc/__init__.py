"""Damped quantum harmonic oscillator under a quadratic Markovian master
equation: closed-form moment evolution, normally ordered characteristic
function, s-ordered quasiprobability distributions, number-basis density
matrices and a brute-force truncated-basis integrator for cross-checks.
"""

from . import catalog, charfunc, densmat, moments, oracle, quasiprob
from .errors import (
    DegenerateSpectrum,
    GaugeViolation,
    LindbladOscError,
    MissingParam,
    NonPositiveDefinite,
    NoSteadyState,
    NotSpecialCase,
    NotThermal,
    StepTooLarge,
)
from .params import (
    ConstraintReport,
    DerivedCoefficients,
    OscillatorParams,
    Regime,
    RegimeTag,
    check_fundamental_constraints,
    classify_regime,
    derived_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "OscillatorParams",
    "DerivedCoefficients",
    "derived_coefficients",
    "Regime",
    "RegimeTag",
    "classify_regime",
    "ConstraintReport",
    "check_fundamental_constraints",
    "LindbladOscError",
    "NoSteadyState",
    "DegenerateSpectrum",
    "NonPositiveDefinite",
    "NotThermal",
    "NotSpecialCase",
    "GaugeViolation",
    "StepTooLarge",
    "MissingParam",
    "moments",
    "charfunc",
    "quasiprob",
    "densmat",
    "oracle",
    "catalog",
]
