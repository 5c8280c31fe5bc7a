"""Yeoh-model characterization of soft films and pneumatic actuator sweeps."""

from .errors import (
    DegenerateFitError,
    DomainError,
    ExtrapolationError,
    HyperfitError,
    NotEquilibratedError,
    ParseError,
)
from .fitting import (
    CompositionSummary,
    FitConfig,
    FitResult,
    TensileRecord,
    fit_yeoh,
    initial_guess,
    summarize_composition,
)
from .yeoh import (
    DOGBONE,
    MaterialProperties,
    SpecimenGeometry,
    StretchState,
    YeohParameters,
    derive_properties,
    strain_energy_density,
    strain_invariant,
    tensile_strength,
    uniaxial_cauchy_stress,
    uniaxial_loading,
)

__version__ = "0.1.0"
