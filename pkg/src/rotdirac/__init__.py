"""Dirac oscillator spectra in a rotating frame around a cosmic string.

Closed-form levels (unconfined and hard-wall quantization, relativistic and
first-order nonrelativistic) together with independent numerical oracles:
a finite-volume radial eigensolver and exact Kummer-function roots.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    GridTooCoarse,
    NoConvergence,
    NonPhysicalRadicand,
    NonPositiveDiscriminant,
    NoSignChange,
    PoleAtB,
    RotDiracError,
    UnboundedDomain,
    ZeroFrequency,
    ZeroNorm,
)
from .kummer import KummerQuery, kummer, kummer_asymptotic, kummer_polynomial, kummer_series
from .model import (
    Branch,
    DerivedParams,
    PhysicalConfig,
    QuantumNumbers,
    RegimeReport,
    coupling_shift,
    delta_parameter,
    derived,
    effective_angular_momentum,
    energy_from_nu,
    nu_from_energy,
    physical_radius,
    regime_check,
)
from .oracle import (
    Domain,
    OracleResult,
    WavefunctionSample,
    evaluate_wavefunction,
    exact_hardwall_roots,
    normalize_and_tail,
    radial_operator_eigenvalues,
)
from .spectra import (
    DegeneracyGroup,
    EnergyLevel,
    Model,
    degeneracy_report,
    energy_hardwall,
    energy_hardwall_nonrel,
    energy_level,
    energy_unconfined,
    energy_unconfined_nonrel,
    spectrum_table,
)
