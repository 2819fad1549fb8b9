"""Parameter pipeline: geometry, susceptibility, couplings, amplitudes and
effective coefficients.

Derived expectations are frozen from independent oracles: slice quadrature
for the spheroid mass and inertia, the rescaled depolarization integrals
for the susceptibility, and direct arithmetic for the drive-set
coefficients.
"""

import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate

from levi import (
    BothZero,
    DriveTone,
    ModeFrequencies,
    ParticlePose,
    ParticleSpec,
    PhysicalSetup,
    ResonantDenominator,
    SystemRates,
    ZeroDenominator,
    balance_second_drive,
    beamsplitter_balance_residual,
    cavity_linewidth,
    coupling_g_ab,
    coupling_g_ac,
    depolarization_factors,
    derive_rates,
    effective_couplings,
    from_angular,
    mass_and_inertia,
    photon_fluctuation_report,
    squeezer_couplings,
    steady_amplitude,
    steady_displacements,
    susceptibility,
    to_angular,
)

KHZ = to_angular(1e3)


# ---------------------------------------------------------------------------
# mass and inertia


def test_mass_matches_frozen_value(ref_particle):
    pair = mass_and_inertia(ref_particle)
    assert pair.mass == pytest.approx(4.581489286485114e-19, rel=1e-12)
    assert pair.moment == pytest.approx(2.8634308040531953e-34, rel=1e-12)


def test_mass_and_inertia_against_quadrature(ref_particle):
    # independent oracle: integrate circular slices along the long axis
    a = ref_particle.semi_axis_long
    b = ref_particle.semi_axis_short
    rho = ref_particle.density

    def r_sq(x):
        return b * b * max(0.0, 1.0 - (x / a) ** 2)

    volume, _ = integrate.quad(lambda x: math.pi * r_sq(x), -a, a)
    moment, _ = integrate.quad(
        lambda x: rho * (x * x * math.pi * r_sq(x) + math.pi * r_sq(x) ** 2 / 4.0),
        -a,
        a,
    )
    pair = mass_and_inertia(ref_particle)
    assert pair.mass == pytest.approx(rho * volume, rel=1e-10)
    assert pair.moment == pytest.approx(moment, rel=1e-10)


def test_sphere_inertia_limit():
    sphere = ParticleSpec(2000.0, 30e-9, 30e-9, 2.0)
    pair = mass_and_inertia(sphere)
    assert pair.moment == pytest.approx(0.4 * pair.mass * (30e-9) ** 2, rel=1e-12)


def test_mass_scales_linearly_with_density(ref_particle):
    doubled = replace(ref_particle, density=2 * ref_particle.density)
    one = mass_and_inertia(ref_particle)
    two = mass_and_inertia(doubled)
    assert two.mass == pytest.approx(2 * one.mass, rel=1e-12)
    assert two.moment == pytest.approx(2 * one.moment, rel=1e-12)


# ---------------------------------------------------------------------------
# susceptibility


def test_depolarization_against_quadrature(ref_particle):
    # independent oracle: the standard ellipsoid integrals, nondimensionalized
    # with u = s / a^2 so the integrand is O(1)
    xi = ref_particle.semi_axis_short / ref_particle.semi_axis_long
    n_long_q, _ = integrate.quad(
        lambda u: 1.0 / ((u + 1.0) ** 1.5 * (u + xi * xi)), 0.0, np.inf
    )
    n_short_q, _ = integrate.quad(
        lambda u: 1.0 / (math.sqrt(u + 1.0) * (u + xi * xi) ** 2), 0.0, np.inf
    )
    n_long_q *= xi * xi / 2.0
    n_short_q *= xi * xi / 2.0
    n_long, n_short = depolarization_factors(ref_particle)
    assert n_long == pytest.approx(n_long_q, abs=1e-12)
    assert n_short == pytest.approx(n_short_q, abs=1e-12)
    assert n_long + 2.0 * n_short == pytest.approx(1.0, abs=1e-12)


def test_susceptibility_frozen_values(ref_particle):
    pair = susceptibility(ref_particle)
    assert pair.s1 == pytest.approx(2.588460944090574, rel=1e-12)
    assert pair.s2 == pytest.approx(1.5974850251897148, rel=1e-12)
    assert pair.s1 > pair.s2 > 0.0


def test_susceptibility_sphere_limit():
    sphere = ParticleSpec(3500.0, 40e-9, 40e-9, 5.7)
    pair = susceptibility(sphere)
    cm = 3.0 * (5.7 - 1.0) / (5.7 + 2.0)
    assert pair.s1 == pytest.approx(cm, rel=1e-12)
    assert pair.s2 == pytest.approx(cm, rel=1e-12)


def test_susceptibility_vacuum_limit():
    nearly_vacuum = ParticleSpec(3500.0, 50e-9, 25e-9, 1.0 + 1e-9)
    pair = susceptibility(nearly_vacuum)
    assert abs(pair.s1) < 2e-9
    assert abs(pair.s2) < 2e-9


def test_susceptibility_requires_dielectric():
    with pytest.raises(ValueError):
        susceptibility(ParticleSpec(3500.0, 50e-9, 25e-9, 0.9))


def test_depolarization_series_branch_is_continuous():
    # the series and closed form must agree around the branch threshold
    for ratio in (0.99994, 0.999949, 0.999951, 0.99996):
        particle = ParticleSpec(1000.0, 50e-9, ratio * 50e-9, 3.0)
        n_long, _ = depolarization_factors(particle)
        e_sq = 1.0 - ratio**2
        series = 1.0 / 3.0 - 2.0 / 15.0 * e_sq - 2.0 / 35.0 * e_sq * e_sq
        assert n_long == pytest.approx(series, abs=1e-12)


# ---------------------------------------------------------------------------
# linewidth and couplings


def test_linewidth_reference_value(ref_cavity):
    kappa = cavity_linewidth(ref_cavity)
    assert from_angular(kappa) == pytest.approx(74948.1145, abs=1e-3)
    assert from_angular(kappa) == pytest.approx(75.2e3, rel=0.01)


def test_linewidth_scaling(ref_cavity):
    kappa = cavity_linewidth(ref_cavity)
    assert cavity_linewidth(replace(ref_cavity, finesse=2e5)) == pytest.approx(
        kappa / 2, rel=1e-12
    )
    assert cavity_linewidth(
        replace(ref_cavity, length=20e-3, wavenumber=None)
    ) == pytest.approx(kappa / 2, rel=1e-12)


def _setup_with_pose(ref_setup, **pose_fields):
    pose = replace(ref_setup.pose, **pose_fields)
    return PhysicalSetup(ref_setup.particle, ref_setup.cavity, pose, ref_setup.freqs)


def test_g_ab_reference_value(ref_setup):
    inertia = mass_and_inertia(ref_setup.particle)
    sus = susceptibility(ref_setup.particle)
    g_ab = coupling_g_ab(ref_setup, inertia, sus)
    assert from_angular(g_ab) == pytest.approx(0.3056, rel=0.10)
    assert from_angular(g_ab) == pytest.approx(0.3053847385878532, rel=1e-9)


def test_g_ac_reference_value(ref_setup):
    inertia = mass_and_inertia(ref_setup.particle)
    sus = susceptibility(ref_setup.particle)
    g_ac = coupling_g_ac(ref_setup, inertia, sus)
    assert from_angular(g_ac) == pytest.approx(0.2189, rel=0.10)
    assert from_angular(g_ac) == pytest.approx(0.21877313263291434, rel=1e-9)


def test_g_ab_vanishes_at_intensity_node(ref_setup):
    inertia = mass_and_inertia(ref_setup.particle)
    sus = susceptibility(ref_setup.particle)
    at_node = _setup_with_pose(ref_setup, y=0.0)
    assert coupling_g_ab(at_node, inertia, sus) == 0.0


def test_g_ab_gaussian_envelope_decay(ref_setup):
    inertia = mass_and_inertia(ref_setup.particle)
    sus = susceptibility(ref_setup.particle)
    far = _setup_with_pose(ref_setup, x=1e-3)
    assert abs(coupling_g_ab(far, inertia, sus)) < 1e-300


def test_g_ac_vanishes_for_aligned_axis(ref_setup):
    inertia = mass_and_inertia(ref_setup.particle)
    sus = susceptibility(ref_setup.particle)
    aligned = _setup_with_pose(ref_setup, phi=0.0)
    assert coupling_g_ac(aligned, inertia, sus) == pytest.approx(0.0, abs=1e-30)


def test_g_ac_vanishes_for_sphere(ref_cavity, ref_pose, ref_freqs):
    sphere = ParticleSpec(3500.0, 25e-9, 25e-9, 5.7)
    setup = PhysicalSetup(sphere, ref_cavity, ref_pose, ref_freqs)
    inertia = mass_and_inertia(sphere)
    sus = susceptibility(sphere)
    assert coupling_g_ac(setup, inertia, sus) == pytest.approx(0.0, abs=1e-30)


def test_couplings_are_pi_periodic_in_angle(ref_setup):
    inertia = mass_and_inertia(ref_setup.particle)
    sus = susceptibility(ref_setup.particle)
    for phi in np.linspace(0.0, math.pi, 64, endpoint=False):
        base = _setup_with_pose(ref_setup, phi=phi)
        shifted = _setup_with_pose(ref_setup, phi=phi + math.pi)
        assert coupling_g_ab(shifted, inertia, sus) == pytest.approx(
            coupling_g_ab(base, inertia, sus), rel=1e-12, abs=1e-30
        )
        assert coupling_g_ac(shifted, inertia, sus) == pytest.approx(
            coupling_g_ac(base, inertia, sus), rel=1e-12, abs=1e-30
        )


# ---------------------------------------------------------------------------
# steady state


def test_steady_amplitude_zero_drive():
    assert steady_amplitude(DriveTone(0.0, to_angular(-47.7e3)), 0.0) == 0.0


def test_steady_amplitude_reference_magnitude():
    alpha = steady_amplitude(DriveTone(to_angular(2.66e9), to_angular(-47.7e3)), 0.0)
    assert abs(alpha) == pytest.approx(2.788e4, rel=1e-3)
    assert alpha.imag == 0.0  # real without decay


def test_steady_amplitude_overdamped_limit():
    tone = DriveTone(to_angular(2.66e9), to_angular(-47.7e3))
    assert abs(steady_amplitude(tone, 1e30)) < 1e-10


def test_steady_amplitude_zero_denominator():
    with pytest.raises(ZeroDenominator):
        steady_amplitude(DriveTone(1.0, 0.0), 0.0)


def test_steady_amplitude_decay_limit_matches():
    tone = DriveTone(to_angular(2.66e9), to_angular(-47.7e3))
    no_decay = steady_amplitude(tone, 0.0)
    tiny = steady_amplitude(tone, 1e-20)
    assert abs(tiny - no_decay) <= 1e-12 * abs(no_decay)


def test_steady_displacements(ref_freqs):
    beta, gamma = steady_displacements(0.0, 0.0, 0.0, 0.0, ref_freqs)
    assert beta == 0.0 and gamma == 0.0
    g_ab, g_ac = 1.9, 1.4
    a1, a2 = 100.0 + 5j, 50.0
    beta, gamma = steady_displacements(g_ab, g_ac, a1, a2, ref_freqs)
    intensity = abs(a1) ** 2 + abs(a2) ** 2
    assert beta * ref_freqs.omega_m == pytest.approx(-g_ab * intensity, rel=1e-12)
    assert gamma * ref_freqs.omega_phi == pytest.approx(-g_ac * intensity, rel=1e-12)
    flipped, _ = steady_displacements(-g_ab, g_ac, a1, a2, ref_freqs)
    assert flipped == pytest.approx(-beta, rel=1e-12)


# ---------------------------------------------------------------------------
# effective couplings


def test_effective_couplings_zero_amplitudes(ref_freqs):
    g1, g2, g3 = effective_couplings(
        1.9, 1.4, 0.0, 0.0, (to_angular(-47.7e3), to_angular(-2.4e6)), ref_freqs
    )
    assert g1 == 0.0 and g2 == 0.0 and g3 == 0.0


def test_effective_couplings_symmetry():
    freqs = ModeFrequencies(omega_cav=1e15, omega_m=KHZ * 100, omega_phi=KHZ * 100)
    detunings = (KHZ * 300, KHZ * 300)
    g1, g2, g3 = effective_couplings(2.0, 2.0, 40.0, 40.0, detunings, freqs)
    assert g1 == pytest.approx(g2, rel=1e-12)


def test_effective_couplings_phase_invariance(ref_freqs, ref_drives):
    detunings = (ref_drives[0].detuning, ref_drives[1].detuning)
    a1, a2 = 27882.6, 10416.7
    base = effective_couplings(1.9, 1.4, a1, a2, detunings, ref_freqs)
    rotated = effective_couplings(
        1.9,
        1.4,
        a1 * np.exp(0.7j),
        a2 * np.exp(-2.1j),
        detunings,
        ref_freqs,
    )
    assert rotated == pytest.approx(base, rel=1e-12)


def test_effective_couplings_reference_drive_set(ref_setup, ref_drives):
    # frozen from direct evaluation with decay-free amplitudes
    inertia = mass_and_inertia(ref_setup.particle)
    sus = susceptibility(ref_setup.particle)
    g_ab = coupling_g_ab(ref_setup, inertia, sus)
    g_ac = coupling_g_ac(ref_setup, inertia, sus)
    a1 = steady_amplitude(ref_drives[0], 0.0)
    a2 = steady_amplitude(ref_drives[1], 0.0)
    detunings = (ref_drives[0].detuning, ref_drives[1].detuning)
    g1, g2, g3 = effective_couplings(g_ab, g_ac, a1, a2, detunings, ref_setup.freqs)
    assert from_angular(g1) == pytest.approx(108.5527, rel=1e-4)
    assert from_angular(g2) == pytest.approx(25.4533, rel=1e-4)
    assert from_angular(g3) == pytest.approx(89.6939, rel=1e-4)


def test_effective_couplings_resonant_denominator(ref_freqs):
    detunings = (-ref_freqs.omega_m, to_angular(-2.4e6))
    with pytest.raises(ResonantDenominator):
        effective_couplings(1.9, 1.4, 100.0, 100.0, detunings, ref_freqs)


def test_balance_residual():
    rates = SystemRates(0, 0, 0, 0, 0, 0, 0, g1=5.0, g2=5.0, g3=1.0)
    assert beamsplitter_balance_residual(rates) == 0.0
    rates = SystemRates(0, 0, 0, 0, 0, 0, 0, g1=5.0, g2=0.0, g3=1.0)
    assert beamsplitter_balance_residual(rates) == 1.0
    rates = SystemRates(0, 0, 0, 0, 0, 0, 0, g1=0.0, g2=0.0, g3=0.0)
    with pytest.raises(BothZero):
        beamsplitter_balance_residual(rates)


def test_balance_residual_reference_drive_set(ref_setup, ref_drives):
    rates = derive_rates(ref_setup, ref_drives)
    residual = beamsplitter_balance_residual(rates)
    assert 0.0 < residual <= 1.0


def test_balance_second_drive(ref_setup, ref_drives):
    tone2 = balance_second_drive(ref_setup, ref_drives[0], ref_drives[1])
    rates = derive_rates(ref_setup, (ref_drives[0], tone2))
    assert beamsplitter_balance_residual(rates) < 1e-8


def test_photon_fluctuation_report():
    rows = photon_fluctuation_report(1e4, 4.0)
    assert rows[0].magnitude == pytest.approx(1e4)
    assert rows[0].fluctuation == pytest.approx(1e2)
    assert rows[0].enhancement_ratio == pytest.approx(1e2)
    assert rows[1].fluctuation == pytest.approx(2.0)
    zeros = photon_fluctuation_report(0.0, 0.0)
    assert zeros[0].magnitude == zeros[0].fluctuation == 0.0


# ---------------------------------------------------------------------------
# squeezer couplings


def _squeezer_inputs(ref_freqs):
    delta = 200.0 * KHZ
    d1 = delta + ref_freqs.omega_m
    d2 = delta + ref_freqs.omega_phi
    return (d1, d2)


def test_squeezer_couplings_zero_amplitudes(ref_freqs):
    gp1, gp3 = squeezer_couplings(
        1.9, 1.4, 0.0, 0.0, _squeezer_inputs(ref_freqs), ref_freqs
    )
    assert gp1 == 0.0 and gp3 == 0.0


def test_squeezer_coupling_sign_structure(ref_freqs):
    detunings = _squeezer_inputs(ref_freqs)
    gp1, gp3 = squeezer_couplings(1.9, 1.4, 2970.0, 8928.0, detunings, ref_freqs)
    gp1_flip, gp3_flip = squeezer_couplings(
        1.9, -1.4, 2970.0, 8928.0, detunings, ref_freqs
    )
    assert gp1_flip == pytest.approx(gp1, rel=1e-12)
    assert gp3_flip == pytest.approx(-gp3, rel=1e-12)


def test_squeezer_requires_matched_detunings(ref_freqs):
    d1 = 200.0 * KHZ + ref_freqs.omega_m
    d2 = 250.0 * KHZ + ref_freqs.omega_phi
    with pytest.raises(ValueError):
        squeezer_couplings(1.9, 1.4, 100.0, 100.0, (d1, d2), ref_freqs)


def test_squeezer_warns_outside_adiabatic_regime(ref_freqs):
    detunings = _squeezer_inputs(ref_freqs)
    # enhanced coupling ~ g * alpha = 2e5 kHz-scale >> delta / 10
    with pytest.warns(UserWarning, match="squeezer detuning"):
        squeezer_couplings(1e3, 1e3, 1e3, 1e3, detunings, ref_freqs)


# ---------------------------------------------------------------------------
# full pipeline


def test_derive_rates_assembles_everything(ref_setup, ref_drives):
    rates = derive_rates(ref_setup, ref_drives)
    assert from_angular(rates.g_ab) == pytest.approx(0.30538, rel=1e-3)
    assert from_angular(rates.kappa) == pytest.approx(74948.1, rel=1e-4)
    assert 1e4 <= abs(rates.alpha1) <= 1e5
    assert 1e4 <= abs(rates.alpha2) <= 1e5
    assert rates.beta != 0.0 and rates.gamma != 0.0
    assert rates.g3 != 0.0
