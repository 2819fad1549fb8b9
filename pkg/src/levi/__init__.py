"""Cavity-mediated coupling of the librational and translational modes of
a levitated nanoparticle.

The package derives every rate of the coupled system from first inputs
(particle geometry and material, cavity, trap frequencies, drive tones),
evaluates the closed-form conditional state-transfer dynamics on the
no-photon-loss branch, and validates those closed forms against an
independent numerical propagator on truncated state spaces.
"""

from .claims import ClaimRow, ClaimsReport, claims_report
from .config import RunConfig, load_config
from .dynamics import (
    ConditionalSpectrum,
    TransferReport,
    beamsplitter_amplitudes,
    conditional_spectrum,
    detuned_conditional_amplitudes,
    fidelity_and_probability,
    numeric_fidelity_maximum,
    resonant_conditional_amplitudes,
    resonant_three_mode_amplitudes,
    scheme_amplitudes,
    transfer_report,
    transfer_time,
)
from .errors import (
    BothZero,
    DegenerateSpectrum,
    DimensionTooLarge,
    FitDiverged,
    LeviError,
    NoTransfer,
    NotNormalized,
    ParseError,
    ResonantDenominator,
    SpecError,
    StepFailure,
    ValidationError,
    VanishedBranch,
    ZeroDenominator,
)
from .integrator import (
    GeneratorMatrix,
    OracleReport,
    PropagationResult,
    StepStats,
    build_fock_model,
    build_subspace_generator,
    closed_form_deviation,
    extract_effective_coupling,
    logarithmic_negativity,
    propagate,
    run_oracle,
)
from .model import (
    CavitySpec,
    DriveTone,
    FockState,
    ModeFrequencies,
    ParticlePose,
    ParticleSpec,
    PhysicalSetup,
    SubspaceState,
    SystemRates,
    Violation,
    from_angular,
    setup_violations,
    to_angular,
    validate_setup,
)
from .physics import (
    InertiaPair,
    PhotonFluctuation,
    SusceptibilityPair,
    balance_second_drive,
    beamsplitter_balance_residual,
    cavity_linewidth,
    coupling_g_ab,
    coupling_g_ac,
    depolarization_factors,
    derive_rates,
    effective_couplings,
    mass_and_inertia,
    photon_fluctuation_report,
    squeezer_couplings,
    steady_amplitude,
    steady_displacements,
    susceptibility,
)
from .sweep import AxisSpec, SweepResult, SweepSpec, run_sweep, sweep_to_csv

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
