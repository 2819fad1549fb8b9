"""Domain types, unit conventions and setup validation.

Unit convention
---------------
Everything inside the package is SI with *angular* frequencies (rad/s).
Energies are expressed as frequencies (hbar = 1 in all dynamical formulas;
hbar reappears only inside zero-point amplitudes, which carry explicit SI
units).  Configuration files and CLI flags use cyclic frequencies (Hz or
kHz); the boundary converts exactly once via :func:`to_angular` /
:func:`from_angular`.

All types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NotNormalized, ValidationError

TWO_PI = 2.0 * math.pi

#: Relative tolerance for the stored wavenumber against 2*pi/wavelength.
WAVENUMBER_RTOL = 1e-12


def to_angular(cyclic):
    """Convert a cyclic frequency (Hz) to an angular one (rad/s)."""
    return TWO_PI * cyclic


def from_angular(angular):
    """Convert an angular frequency (rad/s) to a cyclic one (Hz)."""
    return angular / TWO_PI


@dataclass(frozen=True)
class Violation:
    """A single failed invariant: which field and why."""

    field: str
    reason: str


@dataclass(frozen=True)
class ParticleSpec:
    """Geometry and material of the prolate spheroidal particle.

    Axes are *semi*-axes in meters; density is kg/m^3; rel_permittivity is
    the dimensionless relative permittivity of the material.
    """

    density: float
    semi_axis_long: float
    semi_axis_short: float
    rel_permittivity: float


@dataclass(frozen=True)
class CavitySpec:
    """Optical cavity: length L (m), wavelength (m), finesse.

    The wavenumber is derived as 2*pi/wavelength when not supplied; a
    supplied value must agree with that to relative 1e-12.
    """

    length: float
    wavelength: float
    finesse: float
    wavenumber: float | None = None

    def __post_init__(self):
        if self.wavenumber is None:
            object.__setattr__(self, "wavenumber", TWO_PI / self.wavelength)


@dataclass(frozen=True)
class ParticlePose:
    """Center-of-mass position (m, relative to the cavity center) and the
    angle phi (rad) between the particle long axis and the x axis.

    phi is normalized into [0, pi) on construction; the couplings are
    pi-periodic in phi so this never changes a derived value.
    """

    x: float
    y: float
    z: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", self.phi % math.pi)


@dataclass(frozen=True)
class ModeFrequencies:
    """Angular frequencies (rad/s) of the cavity, translational and
    librational modes."""

    omega_cav: float
    omega_m: float
    omega_phi: float


@dataclass(frozen=True)
class DriveTone:
    """One driving laser: strength rabi (rad/s) and detuning from the cavity
    resonance (rad/s, drive frequency minus cavity frequency)."""

    rabi: float
    detuning: float


@dataclass(frozen=True)
class PhysicalSetup:
    """Validated bundle of particle, cavity, pose and mode frequencies."""

    particle: ParticleSpec
    cavity: CavitySpec
    pose: ParticlePose
    freqs: ModeFrequencies


@dataclass(frozen=True)
class SystemRates:
    """Every derived rate of the coupled system, all in rad/s except the
    dimensionless amplitudes and displacements.

    g_ab, g_ac    single-photon optomechanical couplings
    kappa         cavity energy decay rate
    alpha1/2      complex steady-state intracavity amplitudes per tone
    beta, gamma   steady mechanical displacements (dimensionless)
    g1, g2, g3    drive-enhanced effective coefficients of the two-mode
                  exchange Hamiltonian (mode self-shifts and the
                  beam-splitter coupling)
    """

    g_ab: float
    g_ac: float
    kappa: float
    alpha1: complex
    alpha2: complex
    beta: float
    gamma: float
    g1: float
    g2: float
    g3: float


@dataclass(frozen=True)
class SubspaceState:
    """Complex amplitudes over the single-excitation basis
    (|0>_a|01>_bc, |0>_a|10>_bc, |1>_a|00>_bc).

    Fields may be scalars or equal-shaped numpy arrays (one amplitude per
    sample time).
    """

    c001: complex
    c010: complex
    c100: complex

    def as_array(self) -> np.ndarray:
        """Stack the amplitudes along a new leading axis."""
        return np.asarray([self.c001, self.c010, self.c100])

    def branch_norm(self):
        """Squared norm of the no-decay branch, |c001|^2+|c010|^2+|c100|^2."""
        return (
            np.abs(self.c001) ** 2 + np.abs(self.c010) ** 2 + np.abs(self.c100) ** 2
        )


@dataclass(frozen=True)
class FockState:
    """Amplitude vector over a truncated product Fock basis.

    cutoffs holds the highest occupation per mode (so each mode contributes
    cutoff+1 levels); amplitudes is row-major over the modes in order
    (a, b, c, ...), i.e. the last mode's occupation varies fastest.
    """

    cutoffs: tuple
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "cutoffs", tuple(int(c) for c in self.cutoffs))
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        dim = 1
        for c in self.cutoffs:
            if c < 0:
                raise ValueError("cutoffs must be non-negative")
            dim *= c + 1
        if amps.shape != (dim,):
            raise ValueError(
                f"amplitude vector has length {amps.shape}, expected ({dim},)"
            )
        norm = float(np.linalg.norm(amps))
        if norm > 1.0 + 1e-9:
            raise NotNormalized(f"state norm {norm} exceeds 1 + 1e-9")

    @property
    def dims(self) -> tuple:
        return tuple(c + 1 for c in self.cutoffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _require_positive(violations, owner, name, value):
    if not (value > 0.0) or not math.isfinite(value):
        violations.append(Violation(f"{owner}.{name}", "must be strictly positive"))


def setup_violations(
    particle: ParticleSpec,
    cavity: CavitySpec,
    pose: ParticlePose,
    freqs: ModeFrequencies,
) -> list:
    """Collect every invariant violation of the four setup components.

    Returns the complete list (possibly empty), never stopping at the first
    failure.
    """
    v: list = []
    _require_positive(v, "particle", "density", particle.density)
    _require_positive(v, "particle", "semi_axis_long", particle.semi_axis_long)
    _require_positive(v, "particle", "semi_axis_short", particle.semi_axis_short)
    _require_positive(v, "particle", "rel_permittivity", particle.rel_permittivity)
    if (
        particle.semi_axis_long > 0
        and particle.semi_axis_short > 0
        and particle.semi_axis_long < particle.semi_axis_short
    ):
        v.append(
            Violation(
                "particle.semi_axis_long",
                "must be >= semi_axis_short (prolate spheroid)",
            )
        )

    _require_positive(v, "cavity", "length", cavity.length)
    _require_positive(v, "cavity", "wavelength", cavity.wavelength)
    _require_positive(v, "cavity", "finesse", cavity.finesse)
    if cavity.wavelength > 0:
        k_ref = TWO_PI / cavity.wavelength
        if abs(cavity.wavenumber - k_ref) > WAVENUMBER_RTOL * k_ref:
            v.append(
                Violation(
                    "cavity.wavenumber",
                    f"inconsistent with 2*pi/wavelength = {k_ref!r}",
                )
            )

    for name in ("x", "y", "z", "phi"):
        if not math.isfinite(getattr(pose, name)):
            v.append(Violation(f"pose.{name}", "must be finite"))

    _require_positive(v, "freqs", "omega_cav", freqs.omega_cav)
    _require_positive(v, "freqs", "omega_m", freqs.omega_m)
    _require_positive(v, "freqs", "omega_phi", freqs.omega_phi)
    return v


def validate_setup(
    particle: ParticleSpec,
    cavity: CavitySpec,
    pose: ParticlePose,
    freqs: ModeFrequencies,
) -> PhysicalSetup:
    """Validate all invariants and return the assembled setup.

    Raises ValidationError carrying the complete violation list otherwise.
    A librational frequency at or below the translational one is outside
    the intended regime but only warns.
    """
    violations = setup_violations(particle, cavity, pose, freqs)
    if violations:
        raise ValidationError(violations)
    if freqs.omega_phi <= freqs.omega_m:
        warnings.warn(
            "omega_phi <= omega_m: outside the intended frequency hierarchy",
            stacklevel=2,
        )
    return PhysicalSetup(particle=particle, cavity=cavity, pose=pose, freqs=freqs)
