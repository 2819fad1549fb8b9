"""Derivation of every system rate from the physical setup and drive tones.

The pipeline goes: geometry -> (mass, inertia, susceptibility) ->
single-photon couplings g_ab, g_ac -> cavity linewidth -> steady-state
amplitudes per drive tone -> steady displacements -> drive-enhanced
effective coefficients (mode shifts g1, g2 and the exchange coupling g3,
or the pair-creation analogues for the squeezer detuning choice).

All returned rates are angular (rad/s); inputs are SI.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.constants import c as _C_LIGHT
from scipy.constants import hbar as _HBAR

from .errors import BothZero, LeviError, ResonantDenominator, ZeroDenominator
from .model import (
    TWO_PI,
    DriveTone,
    ModeFrequencies,
    ParticleSpec,
    PhysicalSetup,
    SystemRates,
)
from dataclasses import dataclass


@dataclass(frozen=True)
class InertiaPair:
    """Mass (kg) and moment of inertia (kg m^2) about a short axis through
    the center."""

    mass: float
    moment: float


@dataclass(frozen=True)
class SusceptibilityPair:
    """Diagonal susceptibility elements along the long axis (s1) and the
    short axes (s2) of the spheroid."""

    s1: float
    s2: float


@dataclass(frozen=True)
class PhotonFluctuation:
    """Per-tone photon statistics: mean-amplitude magnitude, its square
    root (the number-fluctuation scale) and the linear-to-nonlinear
    coupling enhancement ratio, which equals that square root."""

    magnitude: float
    fluctuation: float
    enhancement_ratio: float


def particle_volume(particle: ParticleSpec) -> float:
    """Volume of the spheroid, (4/3) pi a b^2 with semi-axes a, b."""
    a = particle.semi_axis_long
    b = particle.semi_axis_short
    return 4.0 / 3.0 * math.pi * a * b * b


def mass_and_inertia(particle: ParticleSpec) -> InertiaPair:
    """Mass and moment of inertia of the uniform prolate spheroid.

    M = rho (4/3) pi a b^2 and I = M (a^2 + b^2) / 5 about a short axis
    through the center, with a, b the semi-axes.
    """
    mass = particle.density * particle_volume(particle)
    a = particle.semi_axis_long
    b = particle.semi_axis_short
    moment = mass * (a * a + b * b) / 5.0
    return InertiaPair(mass=mass, moment=moment)


# Below this squared eccentricity the closed-form depolarization factor
# loses precision to cancellation; a truncated series (error < 3e-14) is
# used instead, which also covers the exact sphere.
_SPHERE_ECC_SQ = 1e-4


def depolarization_factors(particle: ParticleSpec) -> tuple:
    """Depolarization factors (N_long, N_short) of the prolate spheroid.

    N_long = ((1-e^2)/e^3) (atanh(e) - e) with eccentricity
    e^2 = 1 - (b/a)^2, and N_long + 2 N_short = 1.  Near the sphere the
    series 1/3 - (2/15) e^2 - (2/35) e^4 avoids the 0/0 cancellation.
    """
    a = particle.semi_axis_long
    b = particle.semi_axis_short
    e_sq = 1.0 - (b / a) ** 2
    if e_sq == 0.0:
        return 1.0 / 3.0, 1.0 / 3.0
    if e_sq < _SPHERE_ECC_SQ:
        n_long = 1.0 / 3.0 - (2.0 / 15.0) * e_sq - (2.0 / 35.0) * e_sq * e_sq
    else:
        e = math.sqrt(e_sq)
        n_long = (1.0 - e_sq) / e**3 * (math.atanh(e) - e)
    return n_long, 0.5 * (1.0 - n_long)


def susceptibility(particle: ParticleSpec) -> SusceptibilityPair:
    """Susceptibility elements s_i = (eps_r - 1) / (1 + N_i (eps_r - 1)).

    For the sphere both factors are 1/3 and s reduces to the
    Clausius-Mossotti value 3 (eps_r - 1) / (eps_r + 2).  Requires
    eps_r > 1 so that s1 > s2 > 0 for a prolate particle.
    """
    eps = particle.rel_permittivity
    if eps <= 1.0:
        raise ValueError("rel_permittivity must exceed 1")
    n_long, n_short = depolarization_factors(particle)
    chi = eps - 1.0
    return SusceptibilityPair(
        s1=chi / (1.0 + n_long * chi),
        s2=chi / (1.0 + n_short * chi),
    )


def cavity_linewidth(cavity) -> float:
    """Cavity energy decay rate kappa (rad/s) from length and finesse.

    Uses kappa / 2 pi = c / (4 L F), the half-free-spectral-range over
    finesse convention.
    """
    return TWO_PI * _C_LIGHT / (4.0 * cavity.length * cavity.finesse)


def _mode_overlap(setup: PhysicalSetup):
    pose = setup.pose
    cav = setup.cavity
    envelope = math.exp(
        -4.0 * math.pi * (pose.x**2 + pose.z**2) / (cav.wavelength * cav.length)
    )
    ky = cav.wavenumber * pose.y
    return envelope, ky


def coupling_g_ab(
    setup: PhysicalSetup, inertia: InertiaPair, suscept: SusceptibilityPair
) -> float:
    """Single-photon coupling of the cavity to the translational mode.

    g_ab = 2 pi * x_zp * 32 pi^2 c V exp(-4 pi (x^2+z^2)/(lambda L))
           * cos(ky) sin(ky) * (s2 + cos^2(phi) (s1 - s2)) / (lambda^3 L^2)

    with x_zp = sqrt(hbar / 2 M omega_m) and V the particle volume.  The
    susceptibility enters through the polarizability volume V*s_i, and the
    core expression is read as the coupling's cyclic frequency (equivalent
    to evaluating it with the Planck constant h and cyclic mode
    frequencies), hence the leading 2 pi.  This is the unique convention
    that reproduces the reference coupling values for this geometry.
    """
    cav = setup.cavity
    envelope, ky = _mode_overlap(setup)
    x_zp = math.sqrt(_HBAR / (2.0 * inertia.mass * setup.freqs.omega_m))
    volume = particle_volume(setup.particle)
    s_combo = suscept.s2 + math.cos(setup.pose.phi) ** 2 * (suscept.s1 - suscept.s2)
    core = (
        32.0
        * math.pi**2
        * _C_LIGHT
        * envelope
        * math.cos(ky)
        * math.sin(ky)
        * volume
        * s_combo
        / (cav.wavelength**3 * cav.length**2)
    )
    return TWO_PI * x_zp * core


def coupling_g_ac(
    setup: PhysicalSetup, inertia: InertiaPair, suscept: SusceptibilityPair
) -> float:
    """Single-photon coupling of the cavity to the librational mode.

    g_ac = 2 pi * phi_zp * 8 pi c V exp(-4 pi (x^2+z^2)/(lambda L))
           * cos^2(ky) * (s1 - s2) sin(2 phi) / (lambda^2 L^2)

    with phi_zp = sqrt(hbar / 2 I omega_phi).  Vanishes for a sphere
    (s1 = s2) and at phi = 0 (long axis along the polarization).  Same
    convention notes as :func:`coupling_g_ab`.
    """
    cav = setup.cavity
    envelope, ky = _mode_overlap(setup)
    phi_zp = math.sqrt(_HBAR / (2.0 * inertia.moment * setup.freqs.omega_phi))
    volume = particle_volume(setup.particle)
    core = (
        8.0
        * math.pi
        * _C_LIGHT
        * envelope
        * math.cos(ky) ** 2
        * volume
        * (suscept.s1 - suscept.s2)
        * math.sin(2.0 * setup.pose.phi)
        / (cav.wavelength**2 * cav.length**2)
    )
    return TWO_PI * phi_zp * core


def steady_amplitude(tone: DriveTone, kappa: float) -> complex:
    """Classical steady-state intracavity amplitude of one drive tone.

    alpha = rabi / (2 (detuning + i kappa / 2)).  Real when kappa = 0.
    """
    denom = 2.0 * complex(tone.detuning, 0.5 * kappa)
    if denom == 0:
        raise ZeroDenominator("steady amplitude undefined at detuning 0, kappa 0")
    return tone.rabi / denom


def steady_displacements(
    g_ab: float,
    g_ac: float,
    alpha1: complex,
    alpha2: complex,
    freqs: ModeFrequencies,
) -> tuple:
    """Steady displacements of the two mechanical modes.

    beta = -g_ab (|alpha1|^2 + |alpha2|^2) / omega_m and the analogue with
    g_ac, omega_phi for gamma.  Magnitude-squared amplitudes are used so
    the displacement is driven by the intracavity intensity also when the
    amplitudes are complex.
    """
    intensity = abs(alpha1) ** 2 + abs(alpha2) ** 2
    beta = -g_ab * intensity / freqs.omega_m
    gamma = -g_ac * intensity / freqs.omega_phi
    return beta, gamma


def _denominator_guard(named_denoms, tol):
    for name, value in named_denoms:
        if abs(value) <= tol:
            raise ResonantDenominator(
                f"denominator {name} = {value!r} rad/s is within {tol!r} of zero"
            )


def effective_couplings(
    g_ab: float,
    g_ac: float,
    alpha1: complex,
    alpha2: complex,
    detunings: tuple,
    freqs: ModeFrequencies,
) -> tuple:
    """Second-order effective coefficients (g1, g2, g3) after removal of
    the far-detuned cavity mode, for the exchange (beam-splitter) detuning
    choice detuning_i + omega_i = delta.

    g1 = a1^2 g_ab^2 [1/(D1+wm) + 1/(D1-wm)] + a2^2 g_ab^2 [1/(D2+wm) + 1/(D2-wm)]
    g2 = a2^2 g_ac^2 [1/(D2+wp) + 1/(D2-wp)] + a1^2 g_ac^2 [1/(D1+wp) + 1/(D1-wp)]
    g3 = a1 a2 g_ab g_ac [1/(D1+wm) + 1/(D1-wp)]

    with a_i = |alpha_i| (phases are absorbed into a redefinition of the
    mechanical modes, so only magnitudes enter), D_i the drive detunings
    and wm, wp the mechanical frequencies.  The g3 expression is asymmetric
    in the drives; it is evaluated exactly as written.
    """
    d1, d2 = detunings
    wm, wp = freqs.omega_m, freqs.omega_phi
    tol = 1e-6 * max(wm, wp)
    _denominator_guard(
        [
            ("detuning1 + omega_m", d1 + wm),
            ("detuning1 - omega_m", d1 - wm),
            ("detuning2 + omega_m", d2 + wm),
            ("detuning2 - omega_m", d2 - wm),
            ("detuning1 + omega_phi", d1 + wp),
            ("detuning1 - omega_phi", d1 - wp),
            ("detuning2 + omega_phi", d2 + wp),
            ("detuning2 - omega_phi", d2 - wp),
        ],
        tol,
    )
    a1 = abs(alpha1)
    a2 = abs(alpha2)
    g1 = a1 * a1 * g_ab * g_ab * (1.0 / (d1 + wm) + 1.0 / (d1 - wm)) + (
        a2 * a2 * g_ab * g_ab * (1.0 / (d2 + wm) + 1.0 / (d2 - wm))
    )
    g2 = a2 * a2 * g_ac * g_ac * (1.0 / (d2 + wp) + 1.0 / (d2 - wp)) + (
        a1 * a1 * g_ac * g_ac * (1.0 / (d1 + wp) + 1.0 / (d1 - wp))
    )
    g3 = a1 * a2 * g_ab * g_ac * (1.0 / (d1 + wm) + 1.0 / (d1 - wp))
    return g1, g2, g3


def squeezer_couplings(
    g_ab: float,
    g_ac: float,
    alpha1: complex,
    alpha2: complex,
    detunings: tuple,
    freqs: ModeFrequencies,
) -> tuple:
    """Effective coefficients (g1', g3') for the pair-creation detuning
    choice detuning_i - omega_i = delta.

    Derived by the same second-order elimination pattern as
    :func:`effective_couplings` with the red and blue sideband roles
    exchanged (every D - w swapped with D + w):

    g1' = a1^2 g_ab^2 [1/(D1-wm) + 1/(D1+wm)] + a2^2 g_ab^2 [1/(D2-wm) + 1/(D2+wm)]
    g3' = a1 a2 g_ab g_ac [1/(D1-wm) + 1/(D1+wp)]

    The resulting Hamiltonian g1' (nb + nc) + g3' (b'c' + bc) creates
    correlated pairs; a warning is emitted when delta is not at least ten
    times the drive-enhanced couplings, where the elimination degrades.
    """
    d1, d2 = detunings
    wm, wp = freqs.omega_m, freqs.omega_phi
    tol = 1e-6 * max(wm, wp)
    delta1 = d1 - wm
    delta2 = d2 - wp
    if abs(delta1 - delta2) > tol:
        raise ValueError(
            "squeezer scheme requires detuning1 - omega_m = detuning2 - omega_phi "
            f"(got {delta1!r} vs {delta2!r} rad/s)"
        )
    _denominator_guard(
        [
            ("detuning1 - omega_m", d1 - wm),
            ("detuning1 + omega_m", d1 + wm),
            ("detuning2 - omega_m", d2 - wm),
            ("detuning2 + omega_m", d2 + wm),
            ("detuning1 + omega_phi", d1 + wp),
        ],
        tol,
    )
    a1 = abs(alpha1)
    a2 = abs(alpha2)
    enhanced = max(abs(g_ab * a1), abs(g_ac * a2))
    if enhanced > 0 and abs(delta1) < 10.0 * enhanced:
        warnings.warn(
            "squeezer detuning is less than 10x the enhanced couplings; "
            "the eliminated-cavity description is inaccurate here",
            stacklevel=2,
        )
    gp1 = a1 * a1 * g_ab * g_ab * (1.0 / (d1 - wm) + 1.0 / (d1 + wm)) + (
        a2 * a2 * g_ab * g_ab * (1.0 / (d2 - wm) + 1.0 / (d2 + wm))
    )
    gp3 = a1 * a2 * g_ab * g_ac * (1.0 / (d1 - wm) + 1.0 / (d1 + wp))
    return gp1, gp3


def beamsplitter_balance_residual(rates: SystemRates) -> float:
    """Dimensionless imbalance |g1 - g2| / max(|g1|, |g2|) of the two mode
    shifts; zero means the exchange dynamics is undistorted."""
    top = max(abs(rates.g1), abs(rates.g2))
    if top == 0.0:
        raise BothZero("both effective mode shifts vanish")
    return abs(rates.g1 - rates.g2) / top


def photon_fluctuation_report(alpha1: complex, alpha2: complex) -> list:
    """Photon statistics per tone.

    The number fluctuation scales as sqrt(|alpha|); the linear coupling is
    enhanced by |alpha| while the residual nonlinear one scales with the
    fluctuation, so their ratio is again sqrt(|alpha|).
    """
    out = []
    for alpha in (alpha1, alpha2):
        mag = abs(alpha)
        root = math.sqrt(mag)
        out.append(
            PhotonFluctuation(magnitude=mag, fluctuation=root, enhancement_ratio=root)
        )
    return out


def derive_rates(setup: PhysicalSetup, drives: tuple) -> SystemRates:
    """Run the full parameter pipeline for a validated setup and two drive
    tones, returning the assembled SystemRates."""
    tone1, tone2 = drives
    inertia = mass_and_inertia(setup.particle)
    suscept = susceptibility(setup.particle)
    g_ab = coupling_g_ab(setup, inertia, suscept)
    g_ac = coupling_g_ac(setup, inertia, suscept)
    kappa = cavity_linewidth(setup.cavity)
    alpha1 = steady_amplitude(tone1, kappa)
    alpha2 = steady_amplitude(tone2, kappa)
    beta, gamma = steady_displacements(g_ab, g_ac, alpha1, alpha2, setup.freqs)
    g1, g2, g3 = effective_couplings(
        g_ab, g_ac, alpha1, alpha2, (tone1.detuning, tone2.detuning), setup.freqs
    )
    return SystemRates(
        g_ab=g_ab,
        g_ac=g_ac,
        kappa=kappa,
        alpha1=alpha1,
        alpha2=alpha2,
        beta=beta,
        gamma=gamma,
        g1=g1,
        g2=g2,
        g3=g3,
    )


def balance_second_drive(
    setup: PhysicalSetup,
    tone1: DriveTone,
    tone2: DriveTone,
    rel_tol: float = 1e-10,
    max_iter: int = 200,
) -> DriveTone:
    """Tune the second drive strength until the two mode shifts balance
    (g1 = g2), keeping its detuning fixed.

    Scans a logarithmic bracket around the given strength for a sign change
    of g1 - g2, then bisects.  Raises LeviError when no bracket exists in
    [rabi/1e3, rabi*1e3].
    """
    if tone2.rabi <= 0:
        raise LeviError("balance requires a positive initial second-drive strength")

    def imbalance(rabi2: float) -> float:
        rates = derive_rates(setup, (tone1, DriveTone(rabi2, tone2.detuning)))
        return rates.g1 - rates.g2

    grid = np.geomspace(tone2.rabi / 1e3, tone2.rabi * 1e3, 121)
    values = [imbalance(r) for r in grid]
    bracket = None
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if flo == 0.0:
            return DriveTone(float(lo), tone2.detuning)
        if flo * fhi < 0:
            bracket = (float(lo), float(hi), flo)
            break
    if bracket is None:
        raise LeviError(
            "no drive strength in [rabi/1e3, rabi*1e3] balances the mode shifts"
        )
    lo, hi, flo = bracket
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = imbalance(mid)
        if fm == 0.0 or (hi - lo) <= rel_tol * mid:
            return DriveTone(mid, tone2.detuning)
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return DriveTone(0.5 * (lo + hi), tone2.detuning)
